#include "eqrf/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "eqrf/study.hpp"

namespace eqrf {

namespace {

using Complex = std::complex<double>;

struct Series {
    std::vector<int> Ns;
    std::vector<double> errors;
    std::vector<double> seconds;
    Eigen::VectorXcd last_state;  // terminal state at the largest N

    double error_at(int N) const {
        for (size_t i = 0; i < Ns.size(); ++i)
            if (Ns[i] == N) return errors[i];
        throw std::logic_error("error_at: N not in series");
    }
};

Series run_series(const BenchmarkProblem& problem, const ReferenceSolution& ref,
                  const Method& method, const std::vector<int>& Ns, int reps = 1) {
    Series s;
    s.Ns = Ns;
    const State y0{problem.y0, 0.0};
    for (int N : Ns) {
        TimeGrid grid(problem.T, N);
        State yN;
        std::vector<double> times;
        for (int rep = 0; rep < std::max(1, reps); ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            yN = march(y0, problem.op, problem.source, grid, method);
            auto t1 = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
        std::sort(times.begin(), times.end());
        s.seconds.push_back(times[times.size() / 2]);
        s.errors.push_back(terminal_error(yN, ref));
        s.last_state = yN.values;
    }
    return s;
}

FitResult fit_of(const Series& s) {
    std::vector<std::pair<double, double>> pairs;
    for (size_t i = 0; i < s.Ns.size(); ++i) pairs.emplace_back(s.Ns[i], s.errors[i]);
    return fit_order(pairs);
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void check(SuiteResult& out, const std::string& name, bool pass, const std::string& detail) {
    out.criteria.push_back({name, pass, detail});
}

void check_order(SuiteResult& out, const std::string& name, double order, double expected,
                 double tol) {
    bool pass = std::fabs(order - expected) <= tol;
    check(out, name, pass,
          "order " + fmt(order) + " vs " + fmt(expected) + " +/- " + fmt(tol));
}

void check_spot(SuiteResult& out, const std::string& name, double measured, double expected,
                double rel_tol) {
    bool pass = std::fabs(measured - expected) <= rel_tol * expected;
    check(out, name, pass,
          "value " + fmt(measured) + " vs " + fmt(expected) + " +/- " + fmt(rel_tol * 100) + "%");
}

void check_runtime(SuiteResult& out, double seconds, double budget) {
    check(out, "runtime", seconds < budget, fmt(seconds) + " s < " + fmt(budget) + " s");
}

// ------------------------------------------------------------------ fig 1

void suite_fig1(SuiteResult& out) {
    const std::vector<int> Ns = {4, 16, 64, 256, 1024};
    const std::map<double, std::pair<double, double>> half_orders = {
        {0.75, {1.75, 0.1}}, {0.5, {1.5, 0.1}}, {0.25, {1.25, 0.1}}};
    for (double r : {0.75, 0.5, 0.25}) {
        ProblemSpec spec{"scalar_intro"};
        spec.r = r;
        BenchmarkProblem problem = preset(spec);
        ReferenceSolution ref = reference_solution(problem);
        Series s0 = run_series(problem, ref, Method::eqrf1(0.0), Ns);
        Series shalf = run_series(problem, ref, Method::eqrf1(0.5), Ns);
        std::string tag = " (r=" + fmt(r) + ")";
        check_order(out, "EQRF1 c1=0" + tag, fit_of(s0).order, 1.0, 0.1);
        auto [exp_o, tol_o] = half_orders.at(r);
        check_order(out, "EQRF1 c1=1/2" + tag, fit_of(shalf).order, exp_o, tol_o);
        if (r == 0.75)
            check_spot(out, "spot r=3/4 c1=1/2 N=1024", shalf.error_at(1024), 4.106270656834e-09,
                       0.01);
        if (r == 0.25)
            check_spot(out, "spot r=1/4 c1=0 N=4", s0.error_at(4), 9.40141495069434e-03, 0.01);
    }
}

// ------------------------------------------------------------------ fig 2 (perbc)

void suite_fig2(SuiteResult& out) {
    // dyadic window past the pre-asymptotic range: the smooth cases settle
    // onto the 1.75 slope there, while the domain-violating case keeps
    // bouncing at every N
    const std::vector<int> Ns = {256, 512, 1024, 2048, 4096, 8192, 16384};
    auto run_case = [&](Complex zeta, const std::string& profile) {
        ProblemSpec spec{"perbc"};
        spec.zeta = zeta;
        spec.profile = profile;
        BenchmarkProblem problem = preset(spec);
        ReferenceSolution ref = reference_solution(problem);
        return fit_of(run_series(problem, ref, Method::eqrf1(0.5), Ns));
    };
    FitResult heat_smooth = run_case(1.0, "smooth");
    FitResult heat_linear = run_case(1.0, "linear");
    FitResult schr_smooth = run_case(Complex(0, 1), "smooth");
    FitResult schr_linear = run_case(Complex(0, 1), "linear");
    check_order(out, "zeta=1 v smooth", heat_smooth.order, 1.75, 0.15);
    check_order(out, "zeta=1 v=x", heat_linear.order, 1.75, 0.15);
    check_order(out, "zeta=i v smooth", schr_smooth.order, 1.75, 0.15);
    bool oscillatory = schr_linear.residual > 3.0 * schr_smooth.residual;
    check(out, "zeta=i v=x oscillatory residual", oscillatory,
          "fit residual " + fmt(schr_linear.residual) + " vs 3 x " +
              fmt(schr_smooth.residual));
}

// ------------------------------------------------------------------ fig 3

void suite_fig3(SuiteResult& out) {
    const std::vector<int> Ns = {4, 16, 64, 256, 1024};
    const std::map<double, double> spots = {{0.5, 4.62824347354523e-06}};
    Method eqrf2t = Method::eqrf(node_set(NodeFamily::trapezoid, 2));
    Method ceqr2t = Method::ceqr2(node_set(NodeFamily::trapezoid, 2));
    for (double r : {0.75, 0.5, 0.25}) {
        ProblemSpec spec{"per"};
        spec.r = r;
        BenchmarkProblem problem = preset(spec);
        ReferenceSolution ref = reference_solution(problem);
        std::string tag = " (r=" + fmt(r) + ")";

        Series se = run_series(problem, ref, eqrf2t, Ns);
        double emax = *std::max_element(se.errors.begin(), se.errors.end());
        check(out, "EQRF2 T exact" + tag, emax <= 1e-10, "max error " + fmt(emax) + " <= 1e-10");

        Series sc = run_series(problem, ref, ceqr2t, Ns);
        check_order(out, "CEQR2 T" + tag, fit_of(sc).order, 1.0 + r, 0.1);
        if (auto it = spots.find(r); it != spots.end())
            check_spot(out, "spot CEQR2 T r=1/2 N=1024", sc.error_at(1024), it->second, 0.02);
    }
}

// ------------------------------------------------------------------ fig 4 / fig 5 (perrad)

void suite_fig4(SuiteResult& out) {
    const std::vector<int> Ns = {20, 40, 60, 80, 100};
    const std::map<double, std::pair<double, double>> gr_orders = {
        {0.75, {2.5, 0.15}}, {0.5, {2.0, 0.15}}, {0.25, {1.5, 0.15}}};
    const std::map<double, std::pair<double, double>> t_orders = {
        {0.75, {2.0, 0.15}}, {0.5, {2.0, 0.15}}, {0.25, {1.5, 0.15}}};
    Method gr = Method::eqrf(node_set(NodeFamily::gauss_radau, 2));
    Method tr = Method::eqrf(node_set(NodeFamily::trapezoid, 2));
    for (double r : {0.75, 0.5, 0.25}) {
        ProblemSpec spec{"perrad"};
        spec.r = r;
        BenchmarkProblem problem = preset(spec);
        ReferenceSolution ref = reference_solution(problem);
        std::string tag = " (r=" + fmt(r) + ")";
        Series sgr = run_series(problem, ref, gr, Ns);
        Series st = run_series(problem, ref, tr, Ns);
        auto [ge, gt] = gr_orders.at(r);
        auto [te, tt] = t_orders.at(r);
        check_order(out, "EQRF2 GR" + tag, fit_of(sgr).order, ge, gt);
        check_order(out, "EQRF2 T" + tag, fit_of(st).order, te, tt);
        if (r == 0.75)
            check_spot(out, "spot EQRF2 GR r=3/4 N=100", sgr.error_at(100), 9.34084869686216e-07,
                       0.02);
    }
}

void suite_fig5(SuiteResult& out) {
    const std::vector<int> Ns = {20, 40, 60, 80, 100};
    const std::map<double, std::pair<double, double>> gl_orders = {
        {0.75, {3.25, 0.15}}, {0.5, {2.5, 0.15}}, {0.25, {1.75, 0.15}}};
    const std::map<double, std::pair<double, double>> nc_orders = {
        {0.75, {3.0, 0.15}}, {0.5, {2.5, 0.15}}, {0.25, {1.75, 0.15}}};
    Method gl = Method::eqrf(node_set(NodeFamily::gauss_lobatto, 3));
    Method nc = Method::eqrf(NodeSet::custom({0.0, 1.0 / 3.0, 1.0}));
    for (double r : {0.75, 0.5, 0.25}) {
        ProblemSpec spec{"perrad"};
        spec.r = r;
        BenchmarkProblem problem = preset(spec);
        ReferenceSolution ref = reference_solution(problem);
        std::string tag = " (r=" + fmt(r) + ")";
        Series sgl = run_series(problem, ref, gl, Ns);
        Series snc = run_series(problem, ref, nc, Ns);
        auto [ge, gt] = gl_orders.at(r);
        auto [ne, nt] = nc_orders.at(r);
        check_order(out, "EQRF3 GL" + tag, fit_of(sgl).order, ge, gt);
        check_order(out, "EQRF3 NC" + tag, fit_of(snc).order, ne, nt);
        if (r == 0.75)
            check_spot(out, "spot EQRF3 GL r=3/4 N=100", sgl.error_at(100), 6.53725922265487e-09,
                       0.02);
    }
}

// ------------------------------------------------------------------ fig 6 (heat)

void suite_fig6(SuiteResult& out) {
    const std::vector<int> Ns = {20, 40, 60, 80, 100};
    BenchmarkProblem problem = preset("heat");
    ReferenceSolution ref = reference_solution(problem);
    const double scale = ref.values.cwiseAbs().maxCoeff();

    Method ceqr2g = Method::ceqr2(node_set(NodeFamily::gauss, 2));
    Method eqrf2f = Method::eqrf(node_set(NodeFamily::gauss, 2), Formulation::fractional_phi);
    Method eqrf2i = Method::eqrf(node_set(NodeFamily::gauss, 2), Formulation::integral_quadrature);

    Series sc = run_series(problem, ref, ceqr2g, Ns, 3);
    Series sf = run_series(problem, ref, eqrf2f, Ns, 3);
    Series si = run_series(problem, ref, eqrf2i, Ns, 3);

    check_order(out, "CEQR2 G", fit_of(sc).order, 1.75, 0.1);
    check_order(out, "EQRF2 G (F)", fit_of(sf).order, 2.5, 0.1);
    check_order(out, "EQRF2 G (I)", fit_of(si).order, 2.5, 0.1);
    check_spot(out, "spot CEQR2 G N=20", sc.error_at(20), 1.0024703346323e-06, 0.02);
    check_spot(out, "spot EQRF2 G (I) N=100", si.error_at(100), 2.93394386563506e-09, 0.02);

    // The two formulations must trace the same error curve at every N. Their
    // terminal STATES differ at the ~1e-9..1e-8 level regardless: with 16
    // quadrature nodes the integral weights of strongly damped modes
    // (|lambda| tau up to ~1e4) are unresolved, but that content never reaches
    // the error maximum; the state gap is reported alongside for
    // transparency.
    double err_curve = 0.0;
    for (size_t i = 0; i < Ns.size(); ++i)
        err_curve = std::max(err_curve, std::fabs(sf.errors[i] - si.errors[i]) / scale);
    double state_gap = (sf.last_state - si.last_state).cwiseAbs().maxCoeff() / scale;
    check(out, "formulations agree", err_curve <= 1e-10,
          "max error-curve diff " + fmt(err_curve) + " <= 1e-10 (terminal-state gap at N=100: " +
              fmt(state_gap) + ")");

    bool faster = true;
    std::ostringstream times;
    for (size_t i = 0; i < Ns.size(); ++i) {
        faster = faster && si.seconds[i] < sf.seconds[i];
        times << (i ? ", " : "") << "N=" << Ns[i] << ": " << fmt(si.seconds[i]) << "/"
              << fmt(sf.seconds[i]);
    }
    check(out, "wall-clock (I) < (F) at every N", faster, times.str());
}

// ------------------------------------------------------------------ property suites

void suite_props(SuiteResult& out) {
    // (a) recurrence phi_lam(z) = z phi_{lam+1}(z) + 1/Gamma(1+lam)
    {
        double worst = 0.0;
        for (double lam = 0.25; lam <= 3.75; lam += 0.25) {
            for (double mag : {1e-3, 1e-1, 1.0, 10.0, 40.0, 300.0, 1e4, 1e6}) {
                for (double ang : {M_PI, M_PI / 2, 3 * M_PI / 4, 2 * M_PI / 3}) {
                    Complex z = std::polar(mag, ang);
                    Complex lhs = phi_frac(PhiOrder(lam), z);
                    Complex rhs = z * phi_frac(PhiOrder(lam + 1.0), z) +
                                  1.0 / std::tgamma(1.0 + lam);
                    double s = std::max({std::abs(lhs), std::abs(z) * std::abs(phi_frac(PhiOrder(lam + 1.0), z)),
                                         1.0 / std::tgamma(1.0 + lam)});
                    worst = std::max(worst, std::abs(lhs - rhs) / s);
                }
            }
        }
        check(out, "(a) phi recurrence", worst <= 1e-11, "worst " + fmt(worst) + " <= 1e-11");
    }
    // (b) phi_frac vs integral oracle, 200 random points
    {
        std::mt19937 rng(20250810);
        std::uniform_real_distribution<double> ulam(0.1, 4.0), umag(-3.0, 3.0),
            uang(M_PI / 2, 3 * M_PI / 2);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            double lam = ulam(rng);
            double mag = std::pow(10.0, umag(rng));
            Complex z = std::polar(mag, uang(rng));
            Complex v = phi_frac(PhiOrder(lam), z);
            EvalReport o = phi_frac_oracle(PhiOrder(lam), z, 1e-13);
            worst = std::max(worst, std::abs(v - o.value) / std::abs(o.value));
        }
        check(out, "(b) phi vs oracle", worst <= 1e-11, "worst " + fmt(worst) + " <= 1e-11");
    }
    // (c) kernel_weight vs brute-force quadrature
    {
        double worst = 0.0;
        for (double lam : {1.25, 1.5, 1.75, 2.5, 3.25}) {
            for (double tn : {0.0, 0.5, 2.5}) {
                for (double tau : {0.02, 0.25}) {
                    for (Complex z : {Complex(0, 0), Complex(-1, 0), Complex(-300, 0),
                                      Complex(-2e4, 0), Complex(0, 4e3), Complex(0, -800),
                                      Complex(-40, 400)}) {
                        if (std::abs(z) * tau > 2.5e3) continue;
                        Complex k = kernel_weight(PhiOrder(lam), tn, tau, z);
                        Complex o = detail::kernel_weight_oracle(lam, tn, tau, z, 1e-14);
                        double s = std::max(std::abs(o), 1e-30);
                        worst = std::max(worst, std::abs(k - o) / s);
                    }
                }
            }
        }
        check(out, "(c) kernel vs quadrature", worst <= 1e-10, "worst " + fmt(worst) + " <= 1e-10");
    }
    // (d) Gauss-Jacobi monomial exactness
    {
        double worst = 0.0;
        for (int n : {1, 2, 4, 8, 16, 32, 64}) {
            for (double r : {0.25, 0.5, 0.75}) {
                QuadRule q = gauss_jacobi(n, r);
                for (int k = 0; k <= 2 * n - 1; k += std::max(1, (2 * n - 1) / 7)) {
                    double acc = 0.0;
                    for (size_t i = 0; i < q.nodes.size(); ++i)
                        acc += q.weights[i] * std::pow(q.nodes[i], k);
                    double moment = 1.0 / (k + r + 1.0);
                    worst = std::max(worst, std::fabs(acc - moment) / moment);
                }
            }
        }
        check(out, "(d) Gauss-Jacobi exactness", worst <= 1e-12, "worst " + fmt(worst) + " <= 1e-12");
    }
    // (e) node-relation residuals
    {
        double worst = 0.0;
        for (int nu = 1; nu <= 6; ++nu) worst = std::max(worst, std::fabs(node_set(NodeFamily::gauss, nu).relation_residual));
        for (int nu = 2; nu <= 6; ++nu) worst = std::max(worst, std::fabs(node_set(NodeFamily::gauss_radau, nu).relation_residual));
        for (int nu = 3; nu <= 6; ++nu) worst = std::max(worst, std::fabs(node_set(NodeFamily::gauss_lobatto, nu).relation_residual));
        double trap = node_set(NodeFamily::trapezoid, 2).relation_residual;
        double ncres = NodeSet::custom({0.0, 1.0 / 3.0, 1.0}).relation_residual;
        bool pass = worst <= 1e-13 && std::fabs(trap + 1.0 / 6.0) <= 1e-15 && std::fabs(ncres) > 1e-3;
        check(out, "(e) node relations", pass,
              "gauss-type worst " + fmt(worst) + ", trapezoid " + fmt(trap) + ", NC " + fmt(ncres));
    }
    // (f) EQRFnu exactness on sum_j a_j t^{jr} sources
    {
        double worst = 0.0;
        const double r = 0.6;
        auto op = DiagonalizableOperator::periodic_spectral_second_derivative(32, Complex(0, 1));
        Eigen::VectorXcd v = op.sample([](double x) { return 1.0 / (2.0 + std::cos(2.0 * M_PI * x)); });
        Eigen::VectorXcd y0 = op.sample([](double x) { return std::sin(2.0 * M_PI * x); });
        const double T = 1.5;
        for (int nu : {1, 2, 3, 4}) {
            std::vector<double> a(nu);
            for (int j = 0; j < nu; ++j) a[j] = 1.0 / (j + 1.0);
            auto h = [a](double u) {
                Complex acc = 0.0;
                double p = 1.0;
                for (double aj : a) {
                    acc += aj * p;
                    p *= u;
                }
                return acc;
            };
            FractionalSource src(r, h, v);
            // exact terminal state from the t_n = 0 kernels over [0, T]
            Eigen::VectorXcd vhat = op.to_modal(v);
            Eigen::VectorXcd yhat = op.to_modal(y0);
            for (Eigen::Index m = 0; m < yhat.size(); ++m) {
                Complex acc = std::exp(T * op.eigenvalues()[m]) * yhat[m];
                acc += a[0] * T * phi_classical(1, T * op.eigenvalues()[m]) * vhat[m];
                for (int j = 1; j < nu; ++j)
                    acc += a[j] * kernel_weight(PhiOrder(1.0 + j * r), 0.0, T, op.eigenvalues()[m]) * vhat[m];
                yhat[m] = acc;
            }
            Eigen::VectorXcd exact = op.from_modal(yhat);
            Method method = nu == 1 ? Method::eqrf1(0.5)
                                    : Method::eqrf(node_set(nu == 3 ? NodeFamily::gauss_lobatto
                                                                    : NodeFamily::gauss,
                                                            nu));
            State yN = march({y0, 0.0}, op, src, TimeGrid(T, 8), method);
            worst = std::max(worst, (yN.values - exact).cwiseAbs().maxCoeff());
        }
        check(out, "(f) EQRFnu exactness", worst <= 1e-11, "worst " + fmt(worst) + " <= 1e-11");
    }
    // (g) reference dual-route agreement
    {
        auto rel_diff = [](const ReferenceSolution& x, const ReferenceSolution& y) {
            double s = x.values.cwiseAbs().maxCoeff();
            return (x.values - y.values).cwiseAbs().maxCoeff() / s;
        };
        Method eqrf2t = Method::eqrf(node_set(NodeFamily::trapezoid, 2));
        Method eqrf3gl = Method::eqrf(node_set(NodeFamily::gauss_lobatto, 3));
        double worst_power = 0.0, worst_exp = 0.0;

        for (const char* name : {"scalar_intro", "per", "perbc"}) {
            BenchmarkProblem p = preset(name);
            worst_power = std::max(
                worst_power,
                rel_diff(reference_solution(p), reference_solution_fine_march(p, 64, eqrf2t)));
        }
        {
            ProblemSpec sp{"perrad"};
            sp.r = 0.5;
            BenchmarkProblem p = preset(sp);
            worst_exp = std::max(
                worst_exp,
                rel_diff(reference_solution(p), reference_solution_fine_march(p, 4096, eqrf3gl)));
        }
        {
            BenchmarkProblem p = preset("heat");
            worst_exp = std::max(
                worst_exp,
                rel_diff(reference_solution(p), reference_solution_fine_march(p, 4096, eqrf3gl)));
        }
        bool pass = worst_power <= 1e-11 && worst_exp <= 1e-10;
        check(out, "(g) reference dual-route", pass,
              "power " + fmt(worst_power) + " <= 1e-11, exp " + fmt(worst_exp) + " <= 1e-10");
    }
}

}  // namespace

std::vector<std::string> acceptance_suites() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "props"};
}

SuiteResult run_acceptance_suite(const std::string& name) {
    SuiteResult out;
    out.suite = name;
    auto t0 = std::chrono::steady_clock::now();
    double budget = 0.0;
    if (name == "fig1") {
        suite_fig1(out);
        budget = 1.0;
    } else if (name == "fig2") {
        suite_fig2(out);
        budget = 600.0;
    } else if (name == "fig3") {
        suite_fig3(out);
        budget = 120.0;
    } else if (name == "fig4") {
        suite_fig4(out);
        budget = 180.0;
    } else if (name == "fig5") {
        suite_fig5(out);
        budget = 180.0;
    } else if (name == "fig6") {
        suite_fig6(out);
        budget = 300.0;
    } else if (name == "props") {
        suite_props(out);
        budget = 120.0;
    } else {
        throw std::invalid_argument("unknown acceptance suite \"" + name + "\"");
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check_runtime(out, out.seconds, budget);
    return out;
}

std::string format_suite_result(const SuiteResult& result) {
    std::ostringstream os;
    for (const CriterionResult& c : result.criteria)
        os << (c.pass ? "[PASS] " : "[FAIL] ") << result.suite << " " << c.name << ": " << c.detail
           << "\n";
    return os.str();
}

}  // namespace eqrf
