// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ovp/obstacles.hpp"
#include "ovp/regularity.hpp"
#include "ovp/taut_string.hpp"
#include "ovp/theory.hpp"
#include "ovp/variational.hpp"

using namespace ovp;

namespace {

const double kE = std::exp(1.0);
int g_failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s — %s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

Lagrangian quad_v() {
    return make_lagrangian([](double, double, double v) { return v * v; },
                           [](double, double, double v) { return 2 * v; },
                           [](double, double, double) { return 2.0; }, 2.0, "v^2");
}

Lagrangian quad_vu() {
    return make_lagrangian([](double, double u, double v) { return v * v + u * u; },
                           [](double, double, double v) { return 2 * v; },
                           [](double, double, double) { return 2.0; }, 2.0, "v^2+u^2");
}

ObstaclePair parabola_band(int n) {
    return ObstaclePair::from_functions(
        0.0, 1.0, [](double x) { return 0.5 - 4.0 * (x - 0.5) * (x - 0.5); },
        [](double) { return 10.0; }, [](double x) { return -8.0 * (x - 0.5); },
        [](double) { return 0.0; }, n);
}

ObstaclePair wide_band(int n) {
    return ObstaclePair::from_functions(
        0.0, 1.0, [](double) { return -10.0; }, [](double) { return 10.0; },
        [](double) { return 0.0; }, [](double) { return 0.0; }, n);
}

// C^{1,1/2} pair: |x - c|^{3/2} bumps; f is active for A = B = 0.
ObstaclePair holder_band(int n) {
    auto f = [](double x) { return 0.3 - 1.2 * std::pow(std::abs(x - 0.5), 1.5); };
    auto fp = [](double x) {
        const double s = x >= 0.5 ? 1.0 : -1.0;
        return -1.8 * s * std::sqrt(std::abs(x - 0.5));
    };
    auto g = [](double x) { return 0.9 - 0.4 * std::pow(std::abs(x - 0.6), 1.5); };
    auto gp = [](double x) {
        const double s = x >= 0.6 ? 1.0 : -1.0;
        return -0.6 * s * std::sqrt(std::abs(x - 0.6));
    };
    return ObstaclePair::from_functions(0.0, 1.0, f, g, fp, gp, n);
}

double sup_diff(const GridFunction& u, const std::function<double(double)>& ref) {
    double m = 0;
    for (size_t i = 0; i < u.size(); ++i)
        m = std::max(m, std::abs(u.value(i) - ref(u.node(i))));
    return m;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---- criteria -------------------------------------------------------------

void criterion_1() {
    const int n = 2001;
    const auto t0 = std::chrono::steady_clock::now();
    ObstaclePair band = parabola_band(n);
    ProblemSpec spec(0.0, 1.0, 0.0, 0.0, quad_v(), band, n);
    SolveResult sol = solve(spec);
    GridFunction oracle = taut_string_oracle(band, 0.0, 0.0, n);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double sup = 0;
    for (size_t i = 0; i < oracle.size(); ++i)
        sup = std::max(sup, std::abs(sol.u.value(i) - oracle.value(i)));
    const bool ok = sol.converged && sup <= 1e-3 && secs < 10.0;
    report(1, ok, "taut-string oracle equivalence",
           "sup|solve-oracle|=" + fmt(sup) + " runtime=" + fmt(secs) + "s");
}

void criterion_2() {
    auto run = [](int n) {
        ProblemSpec spec(0.0, 1.0, 0.0, std::sinh(1.0), quad_vu(), wide_band(801), n);
        SolveResult sol = solve(spec);
        return sup_diff(sol.u, [](double x) { return std::sinh(x); });
    };
    const double e1 = run(2001);
    const double e2 = run(4001);
    const double ratio = e1 / e2;
    const bool ok = e1 <= 1e-3 && ratio >= 3.5 && ratio <= 4.5;
    report(2, ok, "Euler-Lagrange sinh benchmark",
           "sup_err(n=2001)=" + fmt(e1) + " err ratio n->2n=" + fmt(ratio));
}

void criterion_3(const SolveResult& sol, const ProblemSpec& spec,
                 const TheoryConstants& tc, const TwoArgModulus& omega) {
    A3Plan plan;
    plan.delta0 = tc.delta0;
    plan.scales = 10;
    plan.pairs_per_scale = 100;
    plan.seed = 2024;
    A3Report clean = check_A3(sol.u, spec.lagrangian, omega, plan);

    GridFunction bad = sol.u;
    // perturb the free node nearest the domain midpoint (stays feasible: g = 10)
    const double mid = 0.5 * (spec.a + spec.b);
    size_t best = 1;
    double best_dist = 1e300;
    for (size_t i = 1; i + 1 < bad.size(); ++i) {
        const double x = bad.node(i);
        const bool free_node = bad.value(i) > spec.obstacles.f()(x) + 1e-9 &&
                               bad.value(i) < spec.obstacles.g()(x) - 1e-9;
        if (free_node && std::abs(x - mid) < best_dist) {
            best_dist = std::abs(x - mid);
            best = i;
        }
    }
    bad.value(best) = std::min(bad.value(best) + 0.1, spec.obstacles.g()(bad.node(best)));
    A3Report caught = check_A3(bad, spec.lagrangian, omega, plan);

    const bool ok = clean.pairs_checked >= 1000 && clean.violations.empty() &&
                    clean.min_slack >= -clean.tol_quad && !caught.violations.empty();
    report(3, ok, "(A3) membership with the obstacle modulus",
           "pairs=" + std::to_string(clean.pairs_checked) +
               " min_slack=" + fmt(clean.min_slack) + " perturbed_violations=" +
               std::to_string(caught.violations.size()));
}

void criterion_4() {
    bool ok = true;
    std::string detail;
    const double ladder[] = {100.0, 50.0};
    struct Case {
        double sigma, theta;
    } cases[] = {{0.5, 1.0}, {0.5, 0.5}, {1.0, 0.25}};
    double worst_rel = 0;
    for (const auto& c : cases) {
        DiniLadder lad = dini_test([&c](double t) { return std::pow(t, c.sigma); }, 0.0,
                                   c.theta, ladder);
        const double st = c.sigma * c.theta;
        for (size_t i = 0; i < lad.eps.size(); ++i) {
            const double expect = std::pow(kE * lad.eps[i], st) / st;
            const double rel = std::abs(lad.values[i] - expect) / expect;
            worst_rel = std::max(worst_rel, rel);
            if (rel > 1e-4) ok = false;
        }
    }
    detail += "power-law worst rel err=" + fmt(worst_rel);

    auto logmod = [](double xi) { return 1.0 / std::log(kE + 1.0 / xi); };
    const double fail_ladder[] = {0.1, 0.01, 0.001};
    for (double theta : {0.5, 1.0}) {
        DiniLadder lad = dini_test(logmod, 0.0, theta, fail_ladder);
        const bool failed = lad.verdict == DiniVerdict::fail && lad.probe.divergent &&
                            lad.probe.values[0] < lad.probe.values[1] &&
                            lad.probe.values[1] < lad.probe.values[2];
        if (!failed) ok = false;
        detail += " log(theta=" + fmt(theta) + ")=" + to_string(lad.verdict);
    }
    report(4, ok, "Dini suite closed forms and divergence detection", detail);
}

void criterion_5(const ObstaclePair& band, const TheoryConstants& tc) {
    Condition12Options copt;
    const auto& row0 = tc.row_for(0.0);
    copt.thetas = {0.25 * tc.alpha0 * row0.alpha_k, 0.25 * tc.alpha0, 0.5 * tc.alpha0};
    copt.dini.throw_on_underflow = false;
    Condition12Report rep = condition_1_2_suite(band, tc.N, copt);

    bool ok = rep.verdict == DiniVerdict::pass;
    double worst_slope_err = 0;
    for (const auto& e : rep.entries) {
        if (e.sigma <= 0) continue;  // zero modulus: nothing to fit
        const double rel =
            std::abs(e.ladder.fitted_slope - e.analytic_exponent) / e.analytic_exponent;
        worst_slope_err = std::max(worst_slope_err, rel);
        if (rel > 0.20) ok = false;
    }
    for (const auto& pb : rep.power_bounds)
        if (!pb.holds) ok = false;
    report(5, ok, "Holder-obstacle reproduction (C^{1,1/2})",
           "suite=" + to_string(rep.verdict) +
               " worst slope rel err=" + fmt(worst_slope_err) + " power bounds " +
               std::to_string(rep.power_bounds.size()) + " ok");
}

void criterion_6() {
    bool ok = true;
    std::string detail;

    const double N = compute_N(1.0, 2.0, 3.0, 1.0);
    if (std::abs(N - std::sqrt(11.0)) > 1e-12) ok = false;
    detail += "N=" + fmt(N);

    // hand value re-derived from the defining quadratic: (13 - sqrt(165)) / 2
    const double d0 = max_delta0(std::sqrt(11.0));
    const double d0_expect = (13.0 - std::sqrt(165.0)) / 2.0;
    if (std::abs(d0 - d0_expect) > 1e-5) ok = false;
    if (std::abs(d0 + std::sqrt(11.0) * std::sqrt(d0) - 1.0) > 1e-12) ok = false;
    detail += " delta0=" + fmt(d0);

    const double mk = compute_M_k(4.0, 1.0, 0.0);
    if (std::abs(mk - (1.0 + std::sqrt(3.0))) > 1e-12) ok = false;
    detail += " M_k=" + fmt(mk);

    for (double beta : {0.5, 1.0}) {
        const double c0 = 1.0, eps = 0.05;
        LittleDeltaResult r = little_delta(
            [c0, beta](double, double xi) { return c0 * std::pow(xi, beta); }, 1.0, eps);
        const double expect = 4.0 * c0 * std::pow(kE * eps, beta) / beta;
        if (!r.finite || std::abs(r.value - expect) / expect > 1e-4) ok = false;
    }
    {
        const double k = 1.0, eps = 0.05;
        LittleDeltaResult r =
            little_delta([](double m, double xi) { return m * xi; }, k, eps);
        const double a = 4.0 * kE * eps;
        const double expect = a * k / (1.0 - a);
        if (!r.finite || std::abs(r.value - expect) / expect > 1e-4) ok = false;
        detail += " linear_fp=" + fmt(r.value);
    }
    report(6, ok, "constants pipeline closed forms", detail);
}

void criterion_7(const DeltaPipeline& bench_pipe) {
    // benchmark pipeline (delta mostly infinite at desk scale) ...
    PipelineTable tb = tabulate_pipeline(bench_pipe, 20, 20);
    bool ok = table_is_monotone(tb.big) && table_is_monotone(tb.little) &&
              table_is_monotone(tb.delta1) && table_is_monotone(tb.delta2);
    for (size_t i = 0; i < tb.ks.size(); ++i)
        if (tb.little[i][0] != 0.0) ok = false;

    // ... and a synthetic pipeline with finite delta everywhere
    TheoryConstants tc;
    tc.mu = 2.0;
    tc.c = 2.0;
    tc.N = 1.0;
    tc.delta0 = max_delta0(tc.N);
    tc.delta0_hat = 1.0;
    tc.C0 = 1.0;
    tc.alpha0 = 1.0;
    tc.per_k = {{0, 0.1, 0.5, 1, 0.1, 0.1},  {1, 0.2, 0.8, 1, 0.2, 0.2},
                {4, 0.5, 1.5, 1, 0.5, 0.5},  {16, 1.5, 3.0, 1, 1.5, 1.5},
                {32, 3.0, 5.0, 1, 3.0, 3.0}};
    TwoArgModulus om = TwoArgModulus::from_function(
        [](double k, double eps) { return 0.02 * (1.0 + 0.1 * k) * std::sqrt(eps); },
        "synthetic");
    DeltaPipeline toy(tc, om);
    PipelineTable tt = tabulate_pipeline(toy, 20, 20);
    int finite_cells = 0;
    for (const auto& row : tt.little)
        for (double v : row)
            if (std::isfinite(v)) ++finite_cells;
    if (!(table_is_monotone(tt.big) && table_is_monotone(tt.little))) ok = false;
    for (size_t i = 0; i < tt.ks.size(); ++i)
        if (tt.little[i][0] != 0.0) ok = false;
    if (finite_cells < 200) ok = false;  // the toy must actually exercise finite deltas
    report(7, ok, "(P1) lattice monotonicity after envelope",
           "benchmark + synthetic 20x20 lattices monotone, delta(k,0)=0, finite toy cells=" +
               std::to_string(finite_cells));
}

void criterion_8() {
    struct Bench {
        const char* name;
        ProblemSpec spec;
    };
    std::vector<Bench> benches;
    benches.push_back({"taut",
                       ProblemSpec(0.0, 1.0, 0.0, 0.0, quad_v(), parabola_band(2001), 2001)});
    benches.push_back({"sinh", ProblemSpec(0.0, 1.0, 0.0, std::sinh(1.0), quad_vu(),
                                           wide_band(801), 2001)});
    benches.push_back({"holder",
                       ProblemSpec(0.0, 1.0, 0.0, 0.0, quad_vu(), holder_band(1001), 1001)});
    bool ok = true;
    std::string detail;
    for (auto& b : benches) {
        SolveResult sol = solve(b.spec);
        const double c = std::abs(sol.energy) + 1.0;
        const double c1 = std::max(b.spec.obstacles.f_fine().max_abs(),
                                   b.spec.obstacles.g_fine().max_abs());
        const double M = compute_M_growth(b.spec.lagrangian, c1, b.spec.lagrangian.mu,
                                          b.spec.a, b.spec.b);
        const double N = compute_N(c, b.spec.lagrangian.mu, M, b.spec.b - b.spec.a);
        const double norm = sol.u.slope_l2_norm();
        if (!sol.converged || norm > N + 1e-6) ok = false;
        detail += std::string(b.name) + ":||u'||=" + fmt(norm) + "<=N=" + fmt(N) + " ";
    }
    report(8, ok, "norm bound ||u'||_2 <= N with c = |J|+1", detail);
}

void criterion_9(const SolveResult& sol, const DeltaPipeline& pipe,
                 const TheoryConstants& tc) {
    P3Plan plan;
    plan.max_width = tc.delta0 / kE;
    plan.scales = 5;
    plan.pairs_per_scale = 20;
    plan.inner_per_outer = 5;
    plan.seed = 5150;
    P3Report p3 = check_P3(sol.u, pipe.delta_map(), plan);
    EnergySuite es = energy_estimate_suite(sol.u, pipe.Delta_map(), plan);
    const bool counted = (p3.vacuous + (p3.checked - p3.vacuous) == p3.checked) &&
                         (es.vacuous + (es.checked - es.vacuous) == es.checked);
    const bool ok = p3.checked > 0 && es.checked > 0 && p3.violations == 0 &&
                    es.violations == 0 && counted;
    report(9, ok, "(P3) and energy-estimate harness",
           "P3 checked=" + std::to_string(p3.checked) + " vacuous=" +
               std::to_string(p3.vacuous) + " violations=" +
               std::to_string(p3.violations) + "; energy checked=" +
               std::to_string(es.checked) + " vacuous=" + std::to_string(es.vacuous) +
               " violations=" + std::to_string(es.violations));
}

void criterion_10() {
    const int ladder[] = {251, 501, 1001, 2001};
    auto cusp = [](double x) { return std::pow(x, 2.0 / 3.0); };
    auto cands = singular_candidates_profile(cusp, 0.0, 1.0, ladder);
    bool cusp_at_zero = false;
    for (const auto& c : cands)
        if (c.x <= 3.0 / 250.0) cusp_at_zero = true;

    auto lin = [](double x) { return 0.7 * x - 0.2; };
    const bool lin_clean = singular_candidates_profile(lin, 0.0, 1.0, ladder).empty();

    ProblemSpec spec(0.0, 1.0, 0.0, 0.0, quad_vu(), holder_band(251), 251);
    const bool bench_clean = singular_candidates(spec, ladder).empty();

    report(10, cusp_at_zero && lin_clean && bench_clean,
           "singular-candidate regression pair",
           std::string("x^(2/3) flagged=") + (cusp_at_zero ? "yes" : "no") +
               " linear flagged=" + (lin_clean ? "no" : "yes") +
               " smooth benchmark candidates=" + (bench_clean ? "0" : ">0"));
}

}  // namespace

int main() {
    std::printf("acceptance suite\n================\n");

    criterion_1();
    criterion_2();

    // Shared taut-string benchmark artifacts for criteria 3, 7, 9.
    const int n = 2001;
    ObstaclePair band = parabola_band(n);
    ProblemSpec spec(0.0, 1.0, 0.0, 0.0, quad_v(), band, n);
    SolveResult sol = solve(spec);
    TheoryOptions topt;
    TheoryConstants tc = build_theory_constants(spec, sol.energy, topt);
    TwoArgModulus omega = obstacle_omega(band, tc.C0, tc.alpha0);
    DeltaPipeline pipe(tc, omega);

    criterion_3(sol, spec, tc, omega);
    criterion_4();

    // Holder benchmark artifacts for criterion 5.
    ObstaclePair hband = holder_band(1001);
    ProblemSpec hspec(0.0, 1.0, 0.0, 0.0, quad_vu(), hband, 1001);
    SolveResult hsol = solve(hspec);
    TheoryConstants htc = build_theory_constants(hspec, hsol.energy, topt);
    criterion_5(hband, htc);

    criterion_6();
    criterion_7(pipe);
    criterion_8();
    criterion_9(sol, pipe, tc);
    criterion_10();

    std::printf("================\n%s: %d criteria failed\n",
                g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures);
    return g_failures;
}
