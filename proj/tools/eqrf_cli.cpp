#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "eqrf/acceptance.hpp"
#include "eqrf/study.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_phi(double lambda, double re, double im, bool oracle, double tol) {
    nlohmann::json j;
    j["lambda"] = lambda;
    j["z"] = {re, im};
    std::complex<double> z(re, im);
    eqrf::EvalReport rep = oracle ? eqrf::phi_frac_oracle(eqrf::PhiOrder(lambda), z, tol)
                                  : eqrf::phi_frac_report(eqrf::PhiOrder(lambda), z);
    j["value"] = {rep.value.real(), rep.value.imag()};
    j["method"] = eqrf::to_string(rep.method_used);
    j["est_rel_error"] = rep.est_rel_error;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_study(const std::string& config_path, const std::string& out_dir) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot open config " << config_path << "\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    eqrf::StudySpec spec = eqrf::study_from_json(buf.str());
    eqrf::ConvergenceReport report = eqrf::run_study(spec);

    fs::create_directories(out_dir);
    fs::path base = fs::path(config_path).stem();
    fs::path csv_path = fs::path(out_dir) / (base.string() + ".csv");
    fs::path summary_path = fs::path(out_dir) / (base.string() + "_summary.json");
    {
        std::ofstream csv(csv_path);
        eqrf::write_csv(report, csv);
    }
    {
        std::ofstream summary(summary_path);
        summary << eqrf::summary_to_json(spec, report) << "\n";
    }
    std::cout << "wrote " << csv_path.string() << "\n";
    std::cout << "wrote " << summary_path.string() << "\n";
    for (const auto& [label, fit] : report.fits)
        std::cout << label << ": order " << fit.order << " (residual " << fit.residual << ")\n";
    return 0;
}

int cmd_accept(const std::string& suite) {
    std::vector<std::string> suites =
        suite == "all" ? eqrf::acceptance_suites() : std::vector<std::string>{suite};
    bool all_pass = true;
    for (const std::string& s : suites) {
        eqrf::SuiteResult res = eqrf::run_acceptance_suite(s);
        std::cout << eqrf::format_suite_result(res);
        all_pass = all_pass && res.pass();
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential quadrature rules for fractional sources"};
    app.require_subcommand(1);

    double lambda = 1.0, re = 0.0, im = 0.0, tol = 1e-13;
    bool oracle = false;
    CLI::App* phi = app.add_subcommand("phi", "evaluate a fractional phi function");
    phi->add_option("--lambda", lambda, "order lambda > 0")->required();
    phi->add_option("--re", re, "Re z");
    phi->add_option("--im", im, "Im z");
    phi->add_flag("--oracle", oracle, "use the quadrature oracle (|z| <= 1e4)");
    phi->add_option("--tol", tol, "oracle absolute tolerance");

    std::string config, out_dir = ".";
    CLI::App* study = app.add_subcommand("study", "run a convergence/work-precision study");
    study->add_option("--config", config, "study config (JSON)")->required();
    study->add_option("--out", out_dir, "output directory");

    std::string suite;
    CLI::App* accept = app.add_subcommand("accept", "run acceptance suites");
    accept->add_option("--suite", suite, "fig1|fig2|fig3|fig4|fig5|fig6|props|all")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (phi->parsed()) return cmd_phi(lambda, re, im, oracle, tol);
        if (study->parsed()) return cmd_study(config, out_dir);
        if (accept->parsed()) return cmd_accept(suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
