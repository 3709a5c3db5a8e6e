#include "ovp/theory.hpp"

#include <algorithm>
#include <cmath>

#include "ovp/errors.hpp"
#include "ovp/rng.hpp"

namespace ovp {

double compute_N(double c, double mu, double m_growth, double length) {
    if (!(mu > 0)) throw Error("compute_N needs mu > 0");
    if (c < 0 || m_growth < 0 || length < 0) throw Error("compute_N needs nonnegative inputs");
    return std::sqrt(4.0 / mu * c + m_growth * m_growth * length);
}

double max_delta0(double N) {
    if (N < 0) throw Error("max_delta0 needs N >= 0");
    const double s = 0.5 * (-N + std::sqrt(N * N + 4.0));
    return s * s;
}

double compute_M_k(double mu, double c_k, double omega_at_cap) {
    if (!(mu > 0)) throw Error("compute_M_k needs mu > 0");
    if (c_k < 0 || omega_at_cap < 0) throw Error("compute_M_k needs nonnegative inputs");
    return (2.0 * c_k + std::sqrt(4.0 * c_k * c_k + mu * (2.0 * c_k + omega_at_cap))) /
           (mu / 2.0);
}

namespace {

bool growth_holds(const Lagrangian& L, double c1, double mu, double a, double b, double M,
                  double m_cap) {
    if (M >= m_cap) return true;
    const int nx = 17, nu = 17, nv = 81;
    const double v_lo = std::max(M, 1e-12);
    for (int iv = 0; iv < nv; ++iv) {
        // log spacing from M up to the cap, plus the endpoint M itself
        const double t = static_cast<double>(iv) / (nv - 1);
        const double v_mag = (iv == 0) ? M : v_lo * std::pow(m_cap / v_lo, t);
        for (int sign = -1; sign <= 1; sign += 2) {
            const double v = sign * std::max(v_mag, M);
            for (int ix = 0; ix < nx; ++ix) {
                const double x = a + (b - a) * ix / (nx - 1);
                for (int iu = 0; iu < nu; ++iu) {
                    const double u = -c1 + 2.0 * c1 * iu / (nu - 1);
                    if (L.eval(x, u, v) < 0.25 * mu * v * v - 1e-12 * (1.0 + v * v))
                        return false;
                }
            }
        }
    }
    return true;
}

}  // namespace

double compute_M_growth(const Lagrangian& L, double c1, double mu, double a, double b,
                        double m_cap) {
    if (!(mu > 0)) throw Error("compute_M_growth needs mu > 0");
    if (growth_holds(L, c1, mu, a, b, 0.0, m_cap)) return 0.0;
    double lo = 0.0, hi = 1e-3;
    while (hi < m_cap && !growth_holds(L, c1, mu, a, b, hi, m_cap)) {
        lo = hi;
        hi *= 2.0;
    }
    if (hi >= m_cap) throw NoSuchMError("no growth constant below the cap");
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (growth_holds(L, c1, mu, a, b, mid, m_cap)) hi = mid;
        else lo = mid;
    }
    return hi;
}

double delta1_bound(double k, double eps, double c1_k, double alpha_k, double mu,
                    const TwoArgModulus& omega) {
    if (eps <= 0) return 0;
    return std::sqrt(2.0 / mu) *
           std::sqrt(2.0 * c1_k * std::pow(eps, alpha_k) + omega(k, eps));
}

double delta2_bound(double k, double eps, double c1_k, double alpha_k, double c2_k,
                    double mu, const TwoArgModulus& omega) {
    if (eps <= 0) return 0;
    const double d1 = delta1_bound(k, eps, c1_k, alpha_k, mu, omega);
    return c1_k * std::pow(eps + d1, alpha_k) + 2.0 * c2_k * d1 + omega(k, eps);
}

double big_delta(double k, double eps, double N, double mu, double c1_k, double alpha_k,
                 double c2_k, const TwoArgModulus& omega) {
    if (eps <= 0) return 0;
    const double shifted = eps + N * std::sqrt(eps);
    const double d1 = delta1_bound(k, shifted, c1_k, alpha_k, mu, omega);
    const double d2 = delta2_bound(k, shifted, c1_k, alpha_k, c2_k, mu, omega);
    return std::max(d1, 2.0 / std::sqrt(mu) * std::sqrt(d2));
}

double omega_hat(double k, double eps, const TwoArgModulus& omega, double N) {
    if (eps <= 0) return 0;
    return std::sqrt(omega(k, eps + N * std::sqrt(eps)));
}

double omega_bar(double k, double eps, const TwoArgModulus& omega, double alpha_k,
                 double N) {
    const double what = omega_hat(k, eps, omega, N);
    if (what <= 0) return 0;
    return std::pow(std::sqrt(what), alpha_k) + std::sqrt(what) + what;
}

// ---- constants builder ---------------------------------------------------------

const PerKConstants& TheoryConstants::row_for(double k, bool* extrapolated) const {
    if (extrapolated) *extrapolated = false;
    for (const auto& row : per_k)
        if (row.k >= k - 1e-15) return row;
    if (extrapolated) *extrapolated = true;
    return per_k.back();
}

namespace {

// w-interval of the fattened band K0 at abscissa t (l1 fattening by pad).
struct BandGeometry {
    const ObstaclePair* pair;
    double pad;

    std::pair<double, double> k0_interval(double t) const {
        const GridFunction& ff = pair->f_fine();
        const GridFunction& gf = pair->g_fine();
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < ff.size(); ++i) {
            const double dx = std::abs(ff.node(i) - t);
            if (dx > pad) continue;
            lo = std::min(lo, ff.value(i) - (pad - dx));
            hi = std::max(hi, gf.value(i) + (pad - dx));
        }
        if (!(lo <= hi)) {  // t outside the reach of the band; clamp to nearest
            lo = pair->f_at(t) - pad;
            hi = pair->g_at(t) + pad;
        }
        return {lo, hi};
    }
};

}  // namespace

TheoryConstants build_theory_constants(const ProblemSpec& spec, double energy,
                                       const TheoryOptions& opt) {
    TheoryConstants tc;
    const Lagrangian& L = spec.lagrangian;
    const ObstaclePair& obs = spec.obstacles;
    const double a = spec.a, b = spec.b;

    tc.mu = L.mu;
    tc.c = std::abs(energy) + 1.0;
    tc.c1 = std::max(obs.f_fine().max_abs(), obs.g_fine().max_abs());
    tc.M_growth = compute_M_growth(L, tc.c1, tc.mu, a, b);
    tc.N = compute_N(tc.c, tc.mu, tc.M_growth, b - a);
    tc.delta0 = max_delta0(tc.N);
    tc.delta0_hat = tc.delta0 + tc.N * std::sqrt(tc.delta0);

    // Hoelder pair of the obstacle-omega lemma. Boxes are only ever enlarged
    // (estimates on a superset stay valid certificates).
    const double m1 = std::max(obs.M1(), 1.0);
    const double m2 = std::max(obs.M2(), 1.0);
    const HolderEstimate h0 = estimate_holder(
        L, CompactBox{a, b, -m1, m1, -m2, m2}, opt.holder_samples, opt.seed);
    tc.C0 = h0.C;
    tc.alpha0 = h0.alpha;

    BandGeometry geo{&obs, tc.delta0_hat};
    tc.K_u_lo = std::numeric_limits<double>::infinity();
    tc.K_u_hi = -std::numeric_limits<double>::infinity();
    tc.K0_u_lo = std::numeric_limits<double>::infinity();
    tc.K0_u_hi = -std::numeric_limits<double>::infinity();
    const int mt = opt.band_samples;
    std::vector<std::pair<double, double>> k0_ivals(static_cast<size_t>(mt));
    for (int i = 0; i < mt; ++i) {
        const double t = a + (b - a) * i / (mt - 1);
        k0_ivals[static_cast<size_t>(i)] = geo.k0_interval(t);
        tc.K_u_lo = std::min(tc.K_u_lo, obs.f_at(t));
        tc.K_u_hi = std::max(tc.K_u_hi, obs.g_at(t));
        tc.K0_u_lo = std::min(tc.K0_u_lo, k0_ivals[static_cast<size_t>(i)].first);
        tc.K0_u_hi = std::max(tc.K0_u_hi, k0_ivals[static_cast<size_t>(i)].second);
    }

    // omega for the M(k) cap values: built from the estimated moduli.
    const TwoArgModulus omega = obstacle_omega(obs, tc.C0, tc.alpha0);

    const int mw = 21, mp = 21;
    for (double k : opt.k_grid) {
        PerKConstants row;
        row.k = k;
        double sup_l = 0, sup_lv_k0 = 0, sup_lv_k = 0;
        for (int i = 0; i < mt; ++i) {
            const double t = a + (b - a) * i / (mt - 1);
            const auto [w_lo, w_hi] = k0_ivals[static_cast<size_t>(i)];
            const double f_t = obs.f_at(t), g_t = obs.g_at(t);
            for (int j = 0; j < mw; ++j) {
                const double w0 = w_lo + (w_hi - w_lo) * j / (mw - 1);
                const double wb = f_t + (g_t - f_t) * j / (mw - 1);
                for (int q = 0; q < mp; ++q) {
                    const double p = (k == 0) ? 0.0 : -k + 2.0 * k * q / (mp - 1);
                    sup_l = std::max(sup_l, std::abs(L.eval(t, w0, p)));
                    sup_lv_k0 = std::max(sup_lv_k0, std::abs(L.eval_v(t, w0, p)));
                    sup_lv_k = std::max(sup_lv_k, std::abs(L.eval_v(t, wb, p)));
                    if (k == 0) break;
                }
            }
        }
        row.c_k = std::max(sup_l, sup_lv_k0);
        row.C2_k = sup_lv_k;
        row.M_k = compute_M_k(tc.mu, row.c_k, omega(k, tc.delta0_hat));
        const double v_half = std::max(k + row.M_k, 1.0);
        const HolderEstimate hk =
            estimate_holder(L,
                            CompactBox{a, b, std::min(tc.K0_u_lo, -1.0),
                                       std::max(tc.K0_u_hi, 1.0), -v_half, v_half},
                            opt.holder_samples, opt.seed);
        row.alpha_k = hk.alpha;
        row.C1_k = hk.C;
        tc.per_k.push_back(row);
    }

    // Definitional monotonicity in k, restored against estimator noise:
    // sups and constants never decrease, exponents never increase.
    for (size_t i = 1; i < tc.per_k.size(); ++i) {
        auto& cur = tc.per_k[i];
        const auto& prev = tc.per_k[i - 1];
        cur.c_k = std::max(cur.c_k, prev.c_k);
        cur.M_k = std::max(cur.M_k, prev.M_k);
        cur.C1_k = std::max(cur.C1_k, prev.C1_k);
        cur.C2_k = std::max(cur.C2_k, prev.C2_k);
        cur.alpha_k = std::min(cur.alpha_k, prev.alpha_k);
    }
    return tc;
}

// ---- little delta ----------------------------------------------------------------

LittleDeltaResult little_delta(const std::function<double(double, double)>& Delta,
                               double k, double eps, const LittleDeltaOptions& opt) {
    LittleDeltaResult res;
    if (eps <= 0) {
        res.value = 0;
        res.finite = true;
        res.converged = true;
        return res;
    }
    const double upper = std::exp(1.0) * eps;

    auto probe_at = [&](double eta) {
        return probe_truncation([&](double xi) { return Delta(k + eta, xi); }, upper,
                                {1e-6, 1e-9, 1e-12}, 0.68, opt.quad.panels);
    };
    if (probe_at(0.0).divergent) {
        res.diverged_integral = true;
        return res;  // infinite, flagged
    }

    double eta = 0.0;
    for (int it = 0; it < opt.max_iter; ++it) {
        const double phi =
            4.0 * log_dini_integral([&](double xi) { return Delta(k + eta, xi); }, upper,
                                    opt.quad);
        res.iterations = it + 1;
        if (!std::isfinite(phi) || phi > opt.eta_cap) {
            res.value = std::numeric_limits<double>::infinity();
            return res;  // exceeded the cap: reported as the infinite value
        }
        res.residual = std::abs(phi - eta);
        if (res.residual <= opt.rel_tol * (1.0 + std::abs(eta))) {
            eta = std::max(eta, phi);
            res.value = eta;
            res.finite = true;
            res.converged = true;
            if (probe_at(eta).divergent) {
                res.diverged_integral = true;
                res.finite = false;
                res.converged = false;
                res.value = std::numeric_limits<double>::infinity();
            }
            return res;
        }
        eta = std::max(eta, phi);  // Picard iterates are nondecreasing
    }
    // Did not settle below tolerance: conservatively report infinity.
    res.value = std::numeric_limits<double>::infinity();
    return res;
}

// ---- pipeline --------------------------------------------------------------------

DeltaPipeline::DeltaPipeline(TheoryConstants tc, TwoArgModulus omega)
    : tc_(std::move(tc)), omega_(std::move(omega)) {}

double DeltaPipeline::delta1(double k, double eps) const {
    const auto& row = tc_.row_for(k);
    return delta1_bound(k, eps, row.C1_k, row.alpha_k, tc_.mu, omega_);
}

double DeltaPipeline::delta2(double k, double eps) const {
    const auto& row = tc_.row_for(k);
    return delta2_bound(k, eps, row.C1_k, row.alpha_k, row.C2_k, tc_.mu, omega_);
}

double DeltaPipeline::Delta(double k, double eps) const {
    const auto& row = tc_.row_for(k);
    return big_delta(k, eps, tc_.N, tc_.mu, row.C1_k, row.alpha_k, row.C2_k, omega_);
}

double DeltaPipeline::omega_hat_at(double k, double eps) const {
    return omega_hat(k, eps, omega_, tc_.N);
}

double DeltaPipeline::omega_bar_at(double k, double eps) const {
    const auto& row = tc_.row_for(k);
    return omega_bar(k, eps, omega_, row.alpha_k, tc_.N);
}

LittleDeltaResult DeltaPipeline::little_delta_at(double k, double eps,
                                                 const LittleDeltaOptions& opt) const {
    LittleDeltaResult res = little_delta(
        [this](double kk, double xi) { return Delta(kk, xi); }, k, eps, opt);
    bool extrap = false;
    tc_.row_for(k + (res.finite ? res.value : 0.0), &extrap);
    res.k_extrapolated = extrap;
    return res;
}

DeltaSample DeltaPipeline::delta_sample(double k, double eps) const {
    const LittleDeltaResult r = little_delta_at(k, eps);
    return {r.value, r.finite, r.k_extrapolated};
}

DeltaSample DeltaPipeline::Delta_sample(double k, double eps) const {
    bool extrap = false;
    tc_.row_for(k, &extrap);
    return {Delta(k, eps), true, extrap};
}

std::function<DeltaSample(double, double)> DeltaPipeline::delta_map() const {
    return [this](double k, double eps) { return delta_sample(k, eps); };
}

std::function<DeltaSample(double, double)> DeltaPipeline::Delta_map() const {
    return [this](double k, double eps) { return Delta_sample(k, eps); };
}

double DeltaPipeline::eps0_for(double k, std::span<const double> eps_ladder,
                               const LittleDeltaOptions& opt) const {
    double best = 0;
    for (double eps : eps_ladder) {
        const LittleDeltaResult r = little_delta_at(k, eps, opt);
        if (r.finite && r.converged) best = std::max(best, eps);
    }
    return best;
}

// ---- checks ----------------------------------------------------------------------

std::vector<HTestEntry> hypothesis_H_test(const DeltaPipeline& pipe,
                                          std::span<const double> k_grid,
                                          std::span<const double> eps_ladder,
                                          const DiniOptions& opt) {
    std::vector<HTestEntry> out;
    for (double k : k_grid) {
        HTestEntry e;
        e.k = k;
        e.ladder = dini_test([&pipe, k](double xi) { return pipe.omega_bar_at(k, xi); },
                             0.0, 1.0, eps_ladder, opt);
        out.push_back(std::move(e));
    }
    return out;
}

P2Report check_P2(const DeltaPipeline& pipe, double k, std::span<const double> eps_ladder,
                  double c_fit, double eta0, const LittleDeltaOptions& opt) {
    P2Report rep;
    rep.k = k;
    const auto& row = pipe.constants().row_for(k);
    rep.exponent = 0.25 * std::min(row.alpha_k, row.alpha_k * row.alpha_k);

    for (double eps : eps_ladder) {
        const LittleDeltaResult d = pipe.little_delta_at(k, eps, opt);
        const double integral = log_dini_integral(
            [&pipe, k, eta0](double xi) { return pipe.omega_bar_at(k + eta0, xi); },
            std::exp(1.0) * eps, opt.quad);
        const double bracket = std::pow(std::sqrt(eps), rep.exponent) + integral;
        rep.eps.push_back(eps);
        rep.delta_values.push_back(d.value);
        rep.bounds.push_back(bracket);
        if (!d.finite) ++rep.infinite_deltas;
    }
    rep.hypothesis_flag = rep.infinite_deltas > 0;

    if (c_fit <= 0) {
        // calibrate at the largest ladder point with finite data
        for (size_t i = 0; i < rep.eps.size(); ++i) {
            if (std::isfinite(rep.delta_values[i]) && rep.bounds[i] > 0) {
                c_fit = std::max(1.0, rep.delta_values[i] / rep.bounds[i]) * (1.0 + 1e-9);
                break;
            }
        }
        if (c_fit <= 0) c_fit = 1.0;
    }
    rep.c_fit = c_fit;

    rep.inequality_ok = rep.infinite_deltas == 0;
    for (size_t i = 0; i < rep.eps.size() && rep.inequality_ok; ++i)
        if (rep.delta_values[i] > c_fit * rep.bounds[i] * (1.0 + 1e-12))
            rep.inequality_ok = false;

    // decaying-ladder limit: nonincreasing toward ~0
    rep.limit_ok = rep.infinite_deltas == 0;
    for (size_t i = 0; i + 1 < rep.delta_values.size() && rep.limit_ok; ++i)
        if (rep.delta_values[i + 1] > rep.delta_values[i] * (1.0 + 1e-12))
            rep.limit_ok = false;
    if (rep.limit_ok && !rep.delta_values.empty()) {
        const double first = rep.delta_values.front();
        const double last = rep.delta_values.back();
        if (!(last <= 0.5 * first || last <= 1e-12 * (1.0 + first))) rep.limit_ok = false;
    }
    return rep;
}

P3Report check_P3(const GridFunction& u,
                  const std::function<DeltaSample(double, double)>& delta_map,
                  const P3Plan& plan) {
    P3Report rep;
    SplitMix64 rng(plan.seed);
    const double a = u.a(), b = u.b();
    const double len = b - a;
    for (int s = 0; s < plan.scales; ++s) {
        const double width = std::min(plan.max_width / std::pow(2.0, s), len);
        for (int p = 0; p < plan.pairs_per_scale; ++p) {
            const double x1 = a + rng.uniform() * (len - width);
            const double x2 = x1 + width;
            const double k_out = chord_slope(u, x1, x2);
            const DeltaSample d = delta_map(std::abs(k_out), width);
            for (int q = 0; q < plan.inner_per_outer; ++q) {
                double si = x1 + rng.uniform() * width;
                double ti = x1 + rng.uniform() * width;
                if (si > ti) std::swap(si, ti);
                if (!(ti - si > 1e-12 * len)) continue;
                ++rep.checked;
                if (d.extrapolated) ++rep.extrapolated;
                if (!d.finite) {
                    ++rep.vacuous;
                    continue;
                }
                const double lhs = std::abs(k_out - chord_slope(u, si, ti));
                rep.worst_lhs = std::max(rep.worst_lhs, lhs);
                const double ratio = d.value > 0 ? lhs / d.value : (lhs > 0 ? 1e300 : 0);
                rep.max_ratio = std::max(rep.max_ratio, ratio);
                if (ratio > 1.0 + 1e-9) ++rep.violations;
            }
        }
    }
    return rep;
}

EnergyCheck check_energy_estimate(const GridFunction& u, double y, double z,
                                  const std::function<DeltaSample(double, double)>& Delta_map) {
    if (!(y < z)) throw DegeneratePairError("energy estimate needs y < z");
    EnergyCheck chk;
    chk.y = y;
    chk.z = z;
    chk.chord = chord_slope(u, y, z);
    const DeltaSample d = Delta_map(std::abs(chk.chord), z - y);
    chk.threshold = d.value;
    chk.extrapolated = d.extrapolated;
    const double pts[2] = {y, z};
    GridFunction w = u.with_nodes(pts, 1e-12 * (u.b() - u.a()));
    chk.lhs = 0;
    chk.omega_measure = 0;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
        if (w.node(i) < y - 1e-14 || w.node(i + 1) > z + 1e-14) continue;
        const double dev = std::abs(w.cell_slope(i) - chk.chord);
        if (std::isfinite(chk.threshold) && dev >= chk.threshold) {
            const double dx = w.node(i + 1) - w.node(i);
            chk.lhs += dev * dev * dx;
            chk.omega_measure += dx;
        }
    }
    chk.vacuous = chk.omega_measure == 0;
    chk.rhs = std::isfinite(chk.threshold)
                  ? chk.threshold * chk.threshold * (z - y)
                  : std::numeric_limits<double>::infinity();
    chk.slack = chk.rhs - chk.lhs;
    return chk;
}

EnergySuite energy_estimate_suite(const GridFunction& u,
                                  const std::function<DeltaSample(double, double)>& Delta_map,
                                  const P3Plan& plan) {
    EnergySuite suite;
    SplitMix64 rng(plan.seed);
    const double a = u.a(), b = u.b();
    const double len = b - a;
    for (int s = 0; s < plan.scales; ++s) {
        const double width = std::min(plan.max_width / std::pow(2.0, s), len);
        for (int p = 0; p < plan.pairs_per_scale; ++p) {
            const double y = a + rng.uniform() * (len - width);
            const EnergyCheck chk = check_energy_estimate(u, y, y + width, Delta_map);
            ++suite.checked;
            if (chk.extrapolated) ++suite.extrapolated;
            if (chk.vacuous) {
                ++suite.vacuous;
                continue;
            }
            suite.min_slack = std::min(suite.min_slack, chk.slack);
            if (chk.slack < -1e-9 * (1.0 + std::abs(chk.rhs))) ++suite.violations;
        }
    }
    if (suite.checked == suite.vacuous) suite.min_slack = 0;
    return suite;
}

// ---- tabulation ------------------------------------------------------------------

namespace {

void monotone_envelope(std::vector<std::vector<double>>& t) {
    for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = 0; j < t[i].size(); ++j) {
            if (i > 0) t[i][j] = std::max(t[i][j], t[i - 1][j]);
            if (j > 0) t[i][j] = std::max(t[i][j], t[i][j - 1]);
        }
}

}  // namespace

PipelineTable tabulate_pipeline(const DeltaPipeline& pipe, int nk, int ne,
                                const LittleDeltaOptions& opt) {
    PipelineTable tab;
    const auto& tc = pipe.constants();
    const double k_hi = tc.k_grid_max();
    for (int i = 0; i < nk; ++i) tab.ks.push_back(k_hi * i / (nk - 1));
    for (int j = 0; j < ne; ++j) {
        tab.eps_delta.push_back(tc.delta0 / std::exp(1.0) * j / (ne - 1));
        tab.eps_big.push_back(tc.delta0 * j / (ne - 1));
    }
    auto fill = [&](auto&& fn, const std::vector<double>& eps_axis) {
        std::vector<std::vector<double>> m(static_cast<size_t>(nk),
                                           std::vector<double>(static_cast<size_t>(ne)));
        for (int i = 0; i < nk; ++i)
            for (int j = 0; j < ne; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    fn(tab.ks[static_cast<size_t>(i)], eps_axis[static_cast<size_t>(j)]);
        monotone_envelope(m);
        return m;
    };
    tab.delta1 = fill([&](double k, double e) { return pipe.delta1(k, e); }, tab.eps_big);
    tab.delta2 = fill([&](double k, double e) { return pipe.delta2(k, e); }, tab.eps_big);
    tab.big = fill([&](double k, double e) { return pipe.Delta(k, e); }, tab.eps_big);
    tab.omega_bar_tab =
        fill([&](double k, double e) { return pipe.omega_bar_at(k, e); }, tab.eps_big);
    tab.little = fill(
        [&](double k, double e) { return pipe.little_delta_at(k, e, opt).value; },
        tab.eps_delta);
    return tab;
}

bool table_is_monotone(const std::vector<std::vector<double>>& t) {
    for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = 0; j < t[i].size(); ++j) {
            if (i > 0 && t[i][j] < t[i - 1][j]) return false;
            if (j > 0 && t[i][j] < t[i][j - 1]) return false;
        }
    return true;
}

}  // namespace ovp
