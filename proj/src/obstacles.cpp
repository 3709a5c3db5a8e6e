#include "ovp/obstacles.hpp"

#include <algorithm>
#include <cmath>

#include "ovp/errors.hpp"

namespace ovp {

namespace {

ObstaclePair::Fn1 fd_derivative(const ObstaclePair::Fn1& f) {
    return [f](double x) {
        const double h = 1e-6 * (1.0 + std::abs(x));
        return (f(x + h) - f(x - h)) / (2.0 * h);
    };
}

}  // namespace

ObstaclePair::ObstaclePair(GridFunction f, GridFunction g, GridFunction ff, GridFunction gf,
                           GridFunction fpf, GridFunction gpf, Fn1 ffn, Fn1 gfn,
                           double margin)
    : f_grid_(std::move(f)),
      g_grid_(std::move(g)),
      f_fine_(std::move(ff)),
      g_fine_(std::move(gf)),
      fp_fine_(std::move(fpf)),
      gp_fine_(std::move(gpf)),
      f_fn_(std::move(ffn)),
      g_fn_(std::move(gfn)),
      margin_(margin) {
    finish_construction();
}

void ObstaclePair::finish_construction() {
    if (margin_ < 0) throw Error("obstacle margin must be >= 0");
    for (size_t i = 0; i < f_fine_.size(); ++i) {
        if (!(f_fine_.value(i) + margin_ <= g_fine_.value(i)))
            throw InfeasibleSpecError("obstacles must satisfy f + margin <= g everywhere");
    }
    const double len = b() - a();
    const double sup_fp = fp_fine_.max_abs();
    const double sup_gp = gp_fine_.max_abs();
    M2_ = std::max(sup_fp, sup_gp);
    M1_ = std::max(f_fine_.max_abs(), g_fine_.max_abs()) + M2_ * len;
    if (!std::isfinite(M1_) || !std::isfinite(M2_))
        throw NonFiniteError("obstacle bounds not finite");
}

ObstaclePair ObstaclePair::from_functions(double a, double b, Fn1 f, Fn1 g, Fn1 f_prime,
                                          Fn1 g_prime, int n_grid, double margin,
                                          int refine) {
    if (n_grid < 2) throw EmptyGridError("obstacle grid needs n >= 2");
    if (refine < 1) refine = 1;
    const int n_fine = (n_grid - 1) * refine + 1;
    Fn1 fp = f_prime ? f_prime : fd_derivative(f);
    Fn1 gp = g_prime ? g_prime : fd_derivative(g);
    GridFunction fg = GridFunction::sample(a, b, n_grid, f);
    GridFunction gg = GridFunction::sample(a, b, n_grid, g);
    GridFunction ff = GridFunction::sample(a, b, n_fine, f);
    GridFunction gf = GridFunction::sample(a, b, n_fine, g);
    GridFunction fpf = GridFunction::sample(a, b, n_fine, fp);
    GridFunction gpf = GridFunction::sample(a, b, n_fine, gp);
    return ObstaclePair(std::move(fg), std::move(gg), std::move(ff), std::move(gf),
                        std::move(fpf), std::move(gpf), std::move(f), std::move(g), margin);
}

ObstaclePair ObstaclePair::from_grids(GridFunction f, GridFunction g, double margin) {
    if (f.size() != g.size() || f.a() != g.a() || f.b() != g.b())
        throw Error("obstacle grids must share nodes");
    // Derivative samples: cell slopes attributed to cell midpoints.
    auto slope_grid = [](const GridFunction& h) {
        std::vector<double> xs(h.size() - 1), vs(h.size() - 1);
        for (size_t i = 0; i + 1 < h.size(); ++i) {
            xs[i] = 0.5 * (h.node(i) + h.node(i + 1));
            vs[i] = h.cell_slope(i);
        }
        if (xs.size() == 1) {  // need two nodes for a grid function
            xs.push_back(xs[0] + 1e-9);
            vs.push_back(vs[0]);
        }
        return GridFunction(std::move(xs), std::move(vs));
    };
    GridFunction fp = slope_grid(f);
    GridFunction gp = slope_grid(g);
    GridFunction ff = f, gf = g;
    return ObstaclePair(std::move(f), std::move(g), std::move(ff), std::move(gf),
                        std::move(fp), std::move(gp), nullptr, nullptr, margin);
}

const Modulus& ObstaclePair::Moduli::by_name(const std::string& h) const {
    if (h == "f") return f;
    if (h == "f'") return f_prime;
    if (h == "g") return g;
    if (h == "g'") return g_prime;
    throw Error("unknown obstacle component '" + h + "'");
}

ObstaclePair::Moduli ObstaclePair::estimate_moduli(std::span<const double> lags) const {
    std::vector<double> ladder;
    if (lags.empty()) {
        const double h_fine = (b() - a()) / static_cast<double>(f_fine_.size() - 1);
        ladder = log_lag_ladder(h_fine, b() - a(), 8);
        lags = ladder;
    }
    Moduli m{estimate_modulus(f_fine_, lags), estimate_modulus(fp_fine_, lags),
             estimate_modulus(g_fine_, lags), estimate_modulus(gp_fine_, lags)};
    return m;
}

TwoArgModulus obstacle_omega(const ObstaclePair& pair, double c0, double alpha0,
                             std::span<const double> lags) {
    auto m = pair.estimate_moduli(lags);
    return TwoArgModulus::obstacle_form(m.f, m.f_prime, m.g, m.g_prime, c0, alpha0);
}

std::string to_string(DiniVerdict v) {
    switch (v) {
        case DiniVerdict::pass: return "pass";
        case DiniVerdict::fail: return "fail";
        default: return "inconclusive";
    }
}

DiniLadder dini_test(const std::function<double(double)>& omega_h, double gamma,
                     double theta, std::span<const double> eps_ladder,
                     const DiniOptions& opt) {
    for (size_t i = 0; i + 1 < eps_ladder.size(); ++i)
        if (!(eps_ladder[i] > eps_ladder[i + 1]))
            throw Error("eps ladder must be strictly decreasing");
    if (eps_ladder.empty() || !(eps_ladder.back() > 0))
        throw Error("eps ladder must hold positive values");
    if (!(theta > 0)) throw Error("dini_test needs theta > 0");
    if (gamma < 0) throw Error("dini_test needs gamma >= 0");

    auto integrand = [&omega_h, gamma, theta](double xi) {
        const double w = omega_h(xi + gamma * std::sqrt(xi));
        return w <= 0 ? 0.0 : std::pow(w, theta);
    };

    DiniLadder out;
    out.eps.assign(eps_ladder.begin(), eps_ladder.end());
    const double e = std::exp(1.0);
    for (double eps : out.eps) {
        const DiniValue v = dini_integral_with_tail(integrand, e * eps, opt.quad);
        if (!v.trusted && opt.throw_on_underflow)
            throw QuadratureUnderflowError("dini tail estimate above trust threshold");
        out.values.push_back(v.value);
        out.trusted.push_back(v.trusted);
    }
    out.probe = probe_truncation(integrand, e * out.eps.front(), {1e-6, 1e-9, 1e-12},
                                 opt.divergence_ratio, opt.quad.panels);

    out.all_zero = std::all_of(out.values.begin(), out.values.end(),
                               [](double v) { return v <= 1e-300; });
    out.decreasing = true;
    for (size_t i = 0; i + 1 < out.values.size(); ++i)
        if (out.values[i + 1] > out.values[i]) out.decreasing = false;

    {
        // Decay exponent from rung increments: values[i] - values[i+1] is the
        // integral over [e eps_{i+1}, e eps_i], free of the xi_min truncation
        // that biases a direct fit of slow power laws.
        std::vector<double> ix, iy;
        for (size_t i = 0; i + 1 < out.values.size(); ++i) {
            const double d = out.values[i] - out.values[i + 1];
            if (d > 0) {
                ix.push_back(std::sqrt(out.eps[i] * out.eps[i + 1]));
                iy.push_back(d);
            }
        }
        const LogLogFit f =
            ix.size() >= 3 ? fit_loglog(ix, iy) : fit_loglog(out.eps, out.values);
        out.fitted_slope = f.slope;
        out.fit_r2 = f.r2;
    }

    if (out.all_zero) {
        out.verdict = DiniVerdict::pass;
        out.note = "zero integrand";
        return out;
    }
    if (out.probe.divergent) {
        out.verdict = DiniVerdict::fail;
        out.note = "tail divergence across xi_min ladder";
        return out;
    }
    const bool strictly_decreasing = [&] {
        for (size_t i = 0; i + 1 < out.values.size(); ++i)
            if (!(out.values[i + 1] < out.values[i])) return false;
        return true;
    }();
    if (!out.decreasing) {
        out.verdict = DiniVerdict::fail;
        out.note = "values non-decreasing along the ladder";
        return out;
    }
    const bool ratio_cert =
        out.values.back() < opt.ratio_certificate * out.values.front();
    const bool slope_cert = strictly_decreasing &&
                            out.fitted_slope >= opt.slope_floor &&
                            out.fit_r2 >= opt.slope_r2_floor;
    if (ratio_cert || slope_cert) {
        out.verdict = DiniVerdict::pass;
        out.note = ratio_cert ? "ratio certificate" : "slope certificate";
    } else {
        out.verdict = DiniVerdict::inconclusive;
        out.note = "decay not certified on this ladder";
    }
    return out;
}

DiniLadder dini_test(const Modulus& omega_h, double gamma, double theta,
                     std::span<const double> eps_ladder, const DiniOptions& opt) {
    return dini_test([&omega_h](double t) { return omega_h(t); }, gamma, theta, eps_ladder,
                     opt);
}

namespace {

std::vector<double> default_condition_ladder() {
    // Log-spaced from 1.0 down to 1e-8; below that the xi_min = 1e-14
    // truncation tail stops being negligible for the slowest exponents.
    std::vector<double> e;
    for (int i = 0; i <= 32; ++i) e.push_back(std::pow(10.0, -0.25 * i));
    return e;
}

}  // namespace

Condition12Report condition_1_2_suite(const ObstaclePair& pair, double N,
                                      const Condition12Options& opt) {
    Condition12Report rep;
    auto moduli = pair.estimate_moduli();
    std::vector<double> thetas = opt.thetas;
    if (thetas.empty()) thetas = {0.25, 0.5};
    std::vector<double> ladder =
        opt.eps_ladder.empty() ? default_condition_ladder() : opt.eps_ladder;

    const char* names[4] = {"f", "f'", "g", "g'"};
    bool all_pass = true;
    for (const char* h : names) {
        const auto override_it = opt.moduli_override.find(h);
        const bool overridden = override_it != opt.moduli_override.end();
        const Modulus& table = moduli.by_name(h);
        const PowerEnvelope env = fit_power_envelope(table);
        for (double theta : thetas) {
            Condition12Entry entry;
            entry.h = h;
            entry.theta = theta;
            entry.sigma = (!overridden && env.c > 0) ? env.sigma : 0.0;
            // With gamma = N > 0 the sqrt term rules the small-xi regime, so a
            // sigma-power modulus decays at exponent sigma*theta/2 (sigma*theta
            // when gamma = 0).
            entry.analytic_exponent =
                entry.sigma > 0 ? (N > 0 ? 0.5 * env.sigma * theta : env.sigma * theta)
                                : 0.0;
            entry.ladder =
                overridden
                    ? dini_test(override_it->second, N, theta, ladder, opt.dini)
                    : dini_test([env](double t) { return env(t); }, N, theta, ladder,
                                opt.dini);
            if (entry.ladder.verdict != DiniVerdict::pass) all_pass = false;
            rep.entries.push_back(std::move(entry));
        }
    }

    const double e = std::exp(1.0);
    const double eps_top = ladder.front();
    for (double beta : opt.betas) {
        PowerBoundCheck chk;
        chk.beta = beta;
        auto integrand = [N, beta](double xi) {
            return std::pow(xi + N * std::sqrt(xi), beta);
        };
        chk.integral = log_dini_integral(integrand, e * eps_top, opt.dini.quad);
        const double C = std::max(1.0, std::pow(2.0, beta - 1.0));
        chk.majorant = C * (std::pow(e * eps_top, beta) / beta +
                            2.0 * std::pow(N, beta) * std::pow(e * eps_top, 0.5 * beta) / beta);
        chk.holds = chk.integral <= chk.majorant * (1.0 + 1e-12);
        if (!chk.holds) all_pass = false;
        rep.power_bounds.push_back(chk);
    }

    rep.verdict = all_pass ? DiniVerdict::pass : DiniVerdict::fail;
    return rep;
}

}  // namespace ovp
