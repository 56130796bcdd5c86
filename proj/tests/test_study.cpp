#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eqrf/study.hpp"

using namespace eqrf;

TEST_CASE("fit_order on synthetic data") {
    // exact power law: slope recovered exactly, zero residual
    std::vector<std::pair<double, double>> pts;
    for (int N : {10, 20, 40, 80}) pts.emplace_back(N, std::pow(N, -2.5));
    FitResult fit = fit_order(pts);
    CHECK(fit.order == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);

    // constant errors: slope 0
    pts.clear();
    for (int N : {10, 20, 40}) pts.emplace_back(N, 3.7e-5);
    CHECK(fit_order(pts).order == doctest::Approx(0.0));

    pts.clear();
    pts.emplace_back(8, 1e-3);
    pts.emplace_back(16, 1e-4);
    CHECK_THROWS_AS(fit_order(pts), std::invalid_argument);
}

TEST_CASE("fit_order trims the leading cell of a five-point sweep") {
    // convergence data whose first cell is pre-asymptotic
    std::vector<std::pair<double, double>> pts = {{20, 1.42692348454141e-6},
                                                  {40, 1.32282372626167e-7},
                                                  {60, 3.44634450640606e-8},
                                                  {80, 1.27708427830807e-8},
                                                  {100, 6.53725922265487e-9}};
    FitResult fit = fit_order(pts);
    CHECK(fit.points_used == 4);
    CHECK(std::fabs(fit.order - 3.25) <= 0.1);
}

TEST_CASE("run_study on the scalar problem") {
    StudySpec spec;
    spec.problem.name = "scalar_intro";
    spec.problem.r = 0.75;
    spec.Ns = {4, 16, 64, 256, 1024};
    MethodSpec m0;
    m0.scheme = "eqrf";
    m0.nu = 1;
    m0.c1 = 0.5;
    m0.expected_order = 1.75;
    m0.order_tol = 0.1;
    spec.methods.push_back(m0);

    ConvergenceReport rep = run_study(spec);
    REQUIRE(rep.rows.size() == 5);
    CHECK(rep.rows[0].method == "EQRF1 (c1=0.5)");
    CHECK(rep.rows[4].N == 1024);
    CHECK(rep.rows[4].error == doctest::Approx(4.106270656834e-09).epsilon(0.01));
    REQUIRE(rep.fits.count("EQRF1 (c1=0.5)") == 1);
    CHECK(std::fabs(rep.fits.at("EQRF1 (c1=0.5)").order - 1.75) < 0.1);

    // identical rerun reproduces the error column
    ConvergenceReport rep2 = run_study(spec);
    for (size_t i = 0; i < rep.rows.size(); ++i)
        CHECK(rep.rows[i].error ==
              doctest::Approx(rep2.rows[i].error).epsilon(1e-14));

    // single-N study: no fit
    spec.Ns = {64};
    spec.methods[0].expected_order.reset();
    ConvergenceReport rep3 = run_study(spec);
    CHECK(rep3.rows.size() == 1);
    CHECK(rep3.fits.empty());

    // summary JSON carries the slope and the pass verdict
    spec.Ns = {4, 16, 64, 256, 1024};
    spec.methods[0].expected_order = 1.75;
    std::string summary = summary_to_json(spec, rep);
    CHECK(summary.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("CSV round trip") {
    ConvergenceReport rep;
    rep.rows.push_back({"EQRF2 GR", "phi", "gauss_radau", 20, 6.7854264681226e-05, 0.0123});
    rep.rows.push_back({"CEQR2 T", "-", "trapezoid", 1024, 4.62824347354523e-06, 1.5});
    std::ostringstream os;
    write_csv(rep, os);
    std::istringstream is(os.str());
    auto rows = read_csv(is);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].method == "EQRF2 GR");
    CHECK(rows[0].formulation == "phi");
    CHECK(rows[0].nodes == "gauss_radau");
    CHECK(rows[0].N == 20);
    CHECK(rows[0].error == 6.7854264681226e-05);
    CHECK(rows[1].seconds == 1.5);

    // emitted text is stable under a second round trip
    ConvergenceReport back;
    back.rows = rows;
    std::ostringstream os2;
    write_csv(back, os2);
    CHECK(os.str() == os2.str());
}

TEST_CASE("study spec JSON round trip") {
    std::string text = R"({
      "problem": {"name": "perrad", "r": 0.75},
      "methods": [
        {"scheme": "eqrf", "nodes": "gauss_radau", "nu": 2, "expected_order": 2.5, "order_tol": 0.15},
        {"scheme": "eqrf", "nu": 1, "c1": 0.5},
        {"scheme": "ceqr2", "nodes": "trapezoid"},
        {"scheme": "eqrf", "nodes": "custom", "nu": 3, "custom_nodes": [0.0, 0.3333333333333333, 1.0]}
      ],
      "N": [20, 40, 60, 80, 100],
      "repetitions": 3
    })";
    StudySpec spec = study_from_json(text);
    CHECK(spec.problem.name == "perrad");
    CHECK(spec.problem.r.value() == 0.75);
    REQUIRE(spec.methods.size() == 4);
    CHECK(spec.methods[0].build().label() == "EQRF2 GR");
    CHECK(spec.methods[1].build().label() == "EQRF1 (c1=0.5)");
    CHECK(spec.methods[2].build().label() == "CEQR2 T");
    CHECK(spec.methods[3].build().label() == "EQRF3 NC");
    CHECK(spec.Ns.size() == 5);
    CHECK(spec.repetitions == 3);

    StudySpec again = study_from_json(study_to_json(spec));
    CHECK(study_to_json(again) == study_to_json(spec));
}
