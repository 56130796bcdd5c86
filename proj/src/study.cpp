#include "eqrf/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace eqrf {

using nlohmann::json;

Method MethodSpec::build() const {
    if (scheme == "ceqr2") {
        if (nodes == "custom") return Method::ceqr2(NodeSet::custom(custom_nodes));
        if (nodes == "trapezoid") return Method::ceqr2(node_set(NodeFamily::trapezoid, 2));
        if (nodes == "gauss") return Method::ceqr2(node_set(NodeFamily::gauss, 2));
        if (nodes == "gauss_radau") return Method::ceqr2(node_set(NodeFamily::gauss_radau, 2));
        throw std::invalid_argument("MethodSpec: unsupported CEQR2 nodes \"" + nodes + "\"");
    }
    if (scheme != "eqrf") throw std::invalid_argument("MethodSpec: unknown scheme " + scheme);
    Formulation f =
        formulation == "integral" ? Formulation::integral_quadrature : Formulation::fractional_phi;
    if (nu == 1 || c1.has_value()) {
        if (!c1.has_value()) throw std::invalid_argument("MethodSpec: EQRF1 needs c1");
        return Method::eqrf1(*c1);
    }
    NodeSet ns;
    if (nodes == "custom")
        ns = NodeSet::custom(custom_nodes);
    else if (nodes == "trapezoid")
        ns = node_set(NodeFamily::trapezoid, nu);
    else if (nodes == "gauss")
        ns = node_set(NodeFamily::gauss, nu);
    else if (nodes == "gauss_radau")
        ns = node_set(NodeFamily::gauss_radau, nu);
    else if (nodes == "gauss_lobatto")
        ns = node_set(NodeFamily::gauss_lobatto, nu);
    else
        throw std::invalid_argument("MethodSpec: unknown node family \"" + nodes + "\"");
    return Method::eqrf(std::move(ns), f);
}

FitResult fit_order(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<std::pair<double, double>> pts = pairs;
    std::sort(pts.begin(), pts.end());
    if (pts.size() >= 5) pts.erase(pts.begin());  // drop the pre-asymptotic leading cell
    if (pts.size() < 3) throw std::invalid_argument("fit_order: need at least 3 points");
    double sx = 0, sy = 0;
    for (auto& [N, e] : pts) {
        if (!(e > 0.0)) throw std::invalid_argument("fit_order: errors must be positive");
        sx += std::log(N);
        sy += std::log(e);
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto& [N, e] : pts) {
        double dx = std::log(N) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(e) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_order: degenerate abscissae");
    const double slope = sxy / sxx;
    double ss = 0;
    for (auto& [N, e] : pts) {
        double pred = my + slope * (std::log(N) - mx);
        double d = std::log(e) - pred;
        ss += d * d;
    }
    FitResult fit;
    fit.order = -slope;
    fit.residual = std::sqrt(ss / n);
    fit.points_used = static_cast<int>(n);
    return fit;
}

ConvergenceReport run_study(const StudySpec& spec) {
    for (size_t i = 0; i + 1 < spec.Ns.size(); ++i)
        if (spec.Ns[i] >= spec.Ns[i + 1])
            throw std::invalid_argument("run_study: N list must be strictly increasing");

    BenchmarkProblem problem = preset(spec.problem);
    ReferenceSolution ref = reference_solution(problem, spec.reference_tol);
    double scale = ref.values.cwiseAbs().maxCoeff();
    if (ref.tag == ReferenceSolution::Tag::per_mode_quadrature &&
        ref.accuracy_estimate > 1e-9 * std::max(scale, 1.0)) {
        std::ostringstream os;
        os << "run_study: reference accuracy " << ref.accuracy_estimate
           << " too poor for error measurement";
        throw std::runtime_error(os.str());
    }

    ConvergenceReport report;
    const State y0{problem.y0, 0.0};
    for (const MethodSpec& ms : spec.methods) {
        Method method = ms.build();
        std::vector<std::pair<double, double>> pairs;
        for (int N : spec.Ns) {
            TimeGrid grid(problem.T, N);
            State yN;
            std::vector<double> times;
            int reps = std::max(1, spec.repetitions);
            for (int rep = 0; rep < reps; ++rep) {
                auto start = std::chrono::steady_clock::now();
                yN = march(y0, problem.op, problem.source, grid, method);
                auto stop = std::chrono::steady_clock::now();
                times.push_back(std::chrono::duration<double>(stop - start).count());
            }
            std::sort(times.begin(), times.end());
            double seconds = times[times.size() / 2];
            double err = terminal_error(yN, ref);
            report.rows.push_back(
                {method.label(), method.formulation_label(), to_string(method.nodes.family), N,
                 err, seconds});
            pairs.emplace_back(static_cast<double>(N), err);
        }
        if (pairs.size() >= 3) {
            bool positive = std::all_of(pairs.begin(), pairs.end(),
                                        [](auto& p) { return p.second > 0.0; });
            if (positive) report.fits[method.label()] = fit_order(pairs);
        }
    }
    return report;
}

void write_csv(const ConvergenceReport& report, std::ostream& os) {
    os << "method,formulation,nodes,N,error,seconds\n";
    char buf[160];
    for (const StudyRow& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%s,%d,%.17g,%.6g\n", row.method.c_str(),
                      row.formulation.c_str(), row.nodes.c_str(), row.N, row.error, row.seconds);
        os << buf;
    }
}

std::vector<StudyRow> read_csv(std::istream& is) {
    std::vector<StudyRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            if (line != "method,formulation,nodes,N,error,seconds")
                throw std::runtime_error("read_csv: unexpected header");
            header = false;
            continue;
        }
        std::istringstream ls(line);
        StudyRow row;
        std::string field;
        std::getline(ls, row.method, ',');
        std::getline(ls, row.formulation, ',');
        std::getline(ls, row.nodes, ',');
        std::getline(ls, field, ',');
        row.N = std::stoi(field);
        std::getline(ls, field, ',');
        row.error = std::stod(field);
        std::getline(ls, field, ',');
        row.seconds = std::stod(field);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

json method_to_json(const MethodSpec& m) {
    json j;
    j["scheme"] = m.scheme;
    j["nodes"] = m.nodes;
    j["nu"] = m.nu;
    if (!m.custom_nodes.empty()) j["custom_nodes"] = m.custom_nodes;
    if (m.c1) j["c1"] = *m.c1;
    j["formulation"] = m.formulation;
    if (m.expected_order) {
        j["expected_order"] = *m.expected_order;
        j["order_tol"] = m.order_tol;
    }
    return j;
}

MethodSpec method_from_json(const json& j) {
    MethodSpec m;
    m.scheme = j.value("scheme", "eqrf");
    m.nodes = j.value("nodes", "gauss");
    m.nu = j.value("nu", 2);
    if (j.contains("custom_nodes")) m.custom_nodes = j["custom_nodes"].get<std::vector<double>>();
    if (j.contains("c1")) m.c1 = j["c1"].get<double>();
    m.formulation = j.value("formulation", "phi");
    if (j.contains("expected_order")) {
        m.expected_order = j["expected_order"].get<double>();
        m.order_tol = j.value("order_tol", 0.15);
    }
    return m;
}

}  // namespace

StudySpec study_from_json(const std::string& text) {
    json j = json::parse(text);
    StudySpec spec;
    const json& p = j.at("problem");
    spec.problem.name = p.at("name").get<std::string>();
    if (p.contains("r")) spec.problem.r = p["r"].get<double>();
    if (p.contains("size")) spec.problem.size = p["size"].get<int>();
    if (p.contains("zeta")) {
        auto z = p["zeta"];
        spec.problem.zeta = std::complex<double>(z.at(0).get<double>(), z.at(1).get<double>());
    }
    if (p.contains("profile")) spec.problem.profile = p["profile"].get<std::string>();
    for (const json& m : j.at("methods")) spec.methods.push_back(method_from_json(m));
    spec.Ns = j.at("N").get<std::vector<int>>();
    spec.repetitions = j.value("repetitions", 1);
    spec.reference_tol = j.value("reference_tol", 1e-12);
    return spec;
}

std::string study_to_json(const StudySpec& spec) {
    json j;
    json p;
    p["name"] = spec.problem.name;
    if (spec.problem.r) p["r"] = *spec.problem.r;
    if (spec.problem.size) p["size"] = *spec.problem.size;
    if (spec.problem.zeta) p["zeta"] = {spec.problem.zeta->real(), spec.problem.zeta->imag()};
    if (spec.problem.profile) p["profile"] = *spec.problem.profile;
    j["problem"] = p;
    j["methods"] = json::array();
    for (const MethodSpec& m : spec.methods) j["methods"].push_back(method_to_json(m));
    j["N"] = spec.Ns;
    j["repetitions"] = spec.repetitions;
    j["reference_tol"] = spec.reference_tol;
    return j.dump(2);
}

std::string summary_to_json(const StudySpec& spec, const ConvergenceReport& report) {
    json j;
    for (const MethodSpec& ms : spec.methods) {
        Method method = ms.build();
        std::string label = method.label();
        json entry;
        auto it = report.fits.find(label);
        if (it != report.fits.end()) {
            entry["order"] = it->second.order;
            entry["residual"] = it->second.residual;
            if (ms.expected_order) {
                entry["expected_order"] = *ms.expected_order;
                entry["order_tol"] = ms.order_tol;
                entry["pass"] = std::fabs(it->second.order - *ms.expected_order) <= ms.order_tol;
            }
        }
        j[label] = entry;
    }
    return j.dump(2);
}

}  // namespace eqrf
