#include "ovp/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "ovp/errors.hpp"

namespace ovp {

std::vector<double> discrete_derivative(const GridFunction& u) { return u.slopes(); }

namespace {

double window_max_slope(const GridFunction& u, double x, double radius) {
    double best = 0;
    for (size_t i = 0; i + 1 < u.size(); ++i) {
        const double mid = 0.5 * (u.node(i) + u.node(i + 1));
        if (std::abs(mid - x) <= radius)
            best = std::max(best, std::abs(u.cell_slope(i)));
    }
    return best;
}

std::vector<SingularCandidate> scan_ladder(const std::vector<GridFunction>& levels,
                                           const SingularOptions& opt) {
    std::vector<SingularCandidate> out;
    if (levels.size() < 2) return out;
    const GridFunction& coarse = levels.front();
    const GridFunction& fine = levels.back();
    const double h1 = (coarse.b() - coarse.a()) / static_cast<double>(coarse.size() - 1);
    const double radius = opt.cluster_radius > 0 ? opt.cluster_radius : 3.0 * h1;

    // Screen at the finest level: positions of locally maximal |slope|.
    std::vector<double> slope = fine.slopes();
    std::vector<size_t> peaks;
    for (size_t i = 0; i + 1 < fine.size(); ++i) {
        const double s = std::abs(slope[i]);
        const double left = i > 0 ? std::abs(slope[i - 1]) : 0;
        const double right = i + 1 < slope.size() ? std::abs(slope[i + 1]) : 0;
        if (s >= left && s >= right) peaks.push_back(i);
    }

    std::vector<SingularCandidate> flagged;
    for (size_t i : peaks) {
        const double x = 0.5 * (fine.node(i) + fine.node(i + 1));
        SingularCandidate cand;
        cand.x = x;
        bool growing = true;
        for (const GridFunction& lvl : levels)
            cand.level_max_slope.push_back(window_max_slope(lvl, x, radius));
        for (size_t l = 0; l + 1 < cand.level_max_slope.size(); ++l)
            if (cand.level_max_slope[l + 1] <
                opt.per_level_floor * cand.level_max_slope[l])
                growing = false;
        const double base = cand.level_max_slope.front();
        cand.total_growth = base > 0 ? cand.level_max_slope.back() / base
                                     : (cand.level_max_slope.back() > 0 ? 1e300 : 1.0);
        if (growing && cand.total_growth >= opt.growth_factor)
            flagged.push_back(std::move(cand));
    }

    // Cluster flagged peaks by position; keep the strongest per cluster.
    std::sort(flagged.begin(), flagged.end(),
              [](const SingularCandidate& a, const SingularCandidate& b) {
                  return a.x < b.x;
              });
    for (const auto& c : flagged) {
        if (!out.empty() && c.x - out.back().x <= radius) {
            if (c.total_growth > out.back().total_growth) out.back() = c;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::vector<SingularCandidate> singular_candidates(const ProblemSpec& spec,
                                                   std::span<const int> ladder,
                                                   const SingularOptions& opt) {
    if (ladder.size() < 3) throw Error("refinement ladder needs at least 3 levels");
    std::vector<GridFunction> levels;
    for (int n : ladder) {
        ProblemSpec s(spec.a, spec.b, spec.A, spec.B, spec.lagrangian, spec.obstacles, n);
        SolveResult r = solve(s, opt.solve);
        if (!r.converged)
            throw MaxIterationsError("refinement-level solve did not converge");
        levels.push_back(std::move(r.u));
    }
    return scan_ladder(levels, opt);
}

std::vector<SingularCandidate> singular_candidates_profile(
    const std::function<double(double)>& profile, double a, double b,
    std::span<const int> ladder, const SingularOptions& opt) {
    if (ladder.size() < 3) throw Error("refinement ladder needs at least 3 levels");
    std::vector<GridFunction> levels;
    for (int n : ladder) levels.push_back(GridFunction::sample(a, b, n, profile));
    return scan_ladder(levels, opt);
}

Modulus derivative_modulus(const GridFunction& u, std::span<const double> lags) {
    std::vector<double> xs(u.size() - 1), vs(u.size() - 1);
    for (size_t i = 0; i + 1 < u.size(); ++i) {
        xs[i] = 0.5 * (u.node(i) + u.node(i + 1));
        vs[i] = u.cell_slope(i);
    }
    if (xs.size() < 2) {
        xs.push_back(xs.back() + 1e-9);
        vs.push_back(vs.back());
    }
    return estimate_modulus(GridFunction(std::move(xs), std::move(vs)), lags);
}

RegularityReport tonelli_report(const ProblemSpec& spec, const SolveResult& sol,
                                const TheoryConstants& tc, const DeltaPipeline& pipe,
                                const ReportOptions& opt) {
    RegularityReport rep;
    const GridFunction& u = sol.u;
    auto note = [&rep](std::string s) { rep.verdict_notes.push_back(std::move(s)); };

    rep.energy = sol.energy;
    rep.slope_l2 = u.slope_l2_norm();
    rep.n_bound = tc.N;
    if (!sol.converged) {
        note("solver not converged; diagnostics run on the best iterate");
        rep.partial = true;
    }

    rep.a1_ok = check_A1_band(u, spec.obstacles, 1e-9 * (1.0 + tc.c1));
    rep.a2_ok = check_A2(u, spec.lagrangian, tc.c);
    if (rep.slope_l2 > tc.N + 1e-6) note("||u'||_2 exceeds N");

    try {
        A3Plan plan = opt.a3;
        plan.delta0 = std::min(plan.delta0 > 0 ? plan.delta0 : tc.delta0, tc.delta0);
        plan.seed = opt.seed;
        rep.a3 = check_A3(u, spec.lagrangian, pipe.omega(), plan);
    } catch (const Error& e) {
        note(std::string("A3 check failed: ") + e.what());
        rep.partial = true;
    }

    try {
        P3Plan plan = opt.p3;
        plan.max_width = std::min(plan.max_width > 0 ? plan.max_width : 1.0,
                                  tc.delta0 / std::exp(1.0));
        plan.seed = opt.seed + 1;
        rep.p3 = check_P3(u, pipe.delta_map(), plan);
        if (rep.p3.vacuous == rep.p3.checked && rep.p3.checked > 0)
            note("P3 vacuous: delta infinite at every sampled pair");
        else if (rep.p3.vacuous > 0)
            note("P3 partially vacuous: " + std::to_string(rep.p3.vacuous) + " of " +
                 std::to_string(rep.p3.checked) + " pairs have infinite delta");
        if (rep.p3.extrapolated > 0) note("P3 used k-grid extrapolation");
        rep.energy_est = energy_estimate_suite(u, pipe.Delta_map(), plan);
        if (rep.energy_est.vacuous == rep.energy_est.checked && rep.energy_est.checked > 0)
            note("energy estimate vacuous: Omega empty at every sampled pair");
    } catch (const Error& e) {
        note(std::string("P3/energy checks failed: ") + e.what());
        rep.partial = true;
    }

    try {
        std::vector<double> ladder = opt.eps_ladder;
        if (ladder.empty())
            for (int i = 0; i <= 24; ++i)
                ladder.push_back(std::pow(10.0, -0.25 * i));
        DiniOptions dopt;
        dopt.throw_on_underflow = false;
        rep.dini_h = hypothesis_H_test(pipe, opt.k_grid, ladder, dopt);

        Condition12Options copt;
        copt.dini = dopt;
        const auto& row0 = tc.row_for(0.0);
        copt.thetas = {0.25 * tc.alpha0 * row0.alpha_k, 0.25 * tc.alpha0,
                       0.5 * tc.alpha0};
        for (double t : opt.thetas) copt.thetas.push_back(t);
        std::sort(copt.thetas.begin(), copt.thetas.end());
        copt.thetas.erase(std::unique(copt.thetas.begin(), copt.thetas.end()),
                          copt.thetas.end());
        rep.dini_obstacles = condition_1_2_suite(spec.obstacles, tc.N, copt);
    } catch (const Error& e) {
        note(std::string("Dini suite failed: ") + e.what());
        rep.partial = true;
    }

    try {
        rep.singular_candidates = singular_candidates(spec, opt.refinement_ladder,
                                                      opt.singular);
    } catch (const Error& e) {
        note(std::string("refinement ladder failed: ") + e.what());
        rep.partial = true;
    }

    try {
        const double len = spec.b - spec.a;
        const double h = len / (spec.n - 1);
        rep.derivative_mod = derivative_modulus(u, log_lag_ladder(2.0 * h, 0.25 * len, 8));
    } catch (const Error& e) {
        note(std::string("derivative modulus failed: ") + e.what());
        rep.partial = true;
    }

    if (sol.lower_active.empty() && sol.upper_active.empty())
        note("obstacles never active on the solution");
    return rep;
}

}  // namespace ovp
