#include "ovp/lagrangian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "ovp/errors.hpp"
#include "ovp/rng.hpp"

namespace ovp {

namespace {

constexpr double kFdScale = 1e-5;
constexpr double kSafety = 1.1;
// Close-pair ratios may exceed far-pair ratios by at most this factor before
// an exponent candidate is declared unstable. Must stay below the blow-up
// 1e6^(1/6) = 10 that separates adjacent ladder exponents at the probe scale.
constexpr double kStabilityFactor = 6.0;
constexpr std::array<double, 4> kAlphaLadder = {1.0, 0.5, 1.0 / 3.0, 0.25};

struct Point3 {
    double x, u, v;
};

double l1_dist(const Point3& a, const Point3& b) {
    return std::abs(a.x - b.x) + std::abs(a.u - b.u) + std::abs(a.v - b.v);
}

}  // namespace

Lagrangian make_lagrangian(Lagrangian::Fn eval, Lagrangian::Fn eval_v,
                           Lagrangian::Fn eval_vv, double mu, std::string source) {
    Lagrangian L;
    L.eval = std::move(eval);
    L.mu = mu;
    L.source = std::move(source);
    if (eval_v) {
        L.eval_v = std::move(eval_v);
    } else {
        L.fd_derivatives = true;
        L.eval_v = [f = L.eval](double x, double u, double v) {
            const double h = kFdScale * (1.0 + std::abs(v));
            return (f(x, u, v + h) - f(x, u, v - h)) / (2.0 * h);
        };
    }
    if (eval_vv) {
        L.eval_vv = std::move(eval_vv);
    } else {
        L.fd_derivatives = true;
        L.eval_vv = [f = L.eval](double x, double u, double v) {
            const double h = kFdScale * (1.0 + std::abs(v));
            return (f(x, u, v + h) - 2.0 * f(x, u, v) + f(x, u, v - h)) / (h * h);
        };
    }
    return L;
}

double evaluate(const Lagrangian& L, double x, double u, double v) {
    const double y = L.eval(x, u, v);
    if (!std::isfinite(y)) throw NonFiniteError("L evaluated to a non-finite value");
    return y;
}

void CompactBox::validate() const {
    if (!(x_lo < x_hi) || !(u_lo < u_hi) || !(v_lo < v_hi))
        throw DegenerateBoxError("compact box must have lo < hi in every coordinate");
}

double CompactBox::scale() const {
    return std::max({x_hi - x_lo, u_hi - u_lo, v_hi - v_lo});
}

namespace {

// Deterministic sample plan: stratified jittered points, the 8 corners,
// odd-count axis sweeps through the center (so symmetric kinks are hit),
// and a close partner for every base point at l1 distance ~1e-6 * scale.
struct SamplePlan {
    std::vector<Point3> base;
    std::vector<std::pair<Point3, Point3>> close_pairs;
};

SamplePlan build_plan(const CompactBox& box, int n_samples, std::uint64_t seed) {
    SamplePlan plan;
    SplitMix64 rng(seed);
    const int strata = std::max(2, static_cast<int>(std::cbrt(static_cast<double>(n_samples))));
    for (int i = 0; i < strata; ++i)
        for (int j = 0; j < strata; ++j)
            for (int k = 0; k < strata; ++k) {
                const double x =
                    box.x_lo + (box.x_hi - box.x_lo) * (i + rng.uniform()) / strata;
                const double u =
                    box.u_lo + (box.u_hi - box.u_lo) * (j + rng.uniform()) / strata;
                const double v =
                    box.v_lo + (box.v_hi - box.v_lo) * (k + rng.uniform()) / strata;
                plan.base.push_back({x, u, v});
            }
    for (int c = 0; c < 8; ++c)
        plan.base.push_back({(c & 1) ? box.x_hi : box.x_lo, (c & 2) ? box.u_hi : box.u_lo,
                             (c & 4) ? box.v_hi : box.v_lo});
    const int sweep = 41;
    const double xc = 0.5 * (box.x_lo + box.x_hi);
    const double uc = 0.5 * (box.u_lo + box.u_hi);
    const double vc = 0.5 * (box.v_lo + box.v_hi);
    for (int i = 0; i < sweep; ++i) {
        const double t = static_cast<double>(i) / (sweep - 1);
        plan.base.push_back({box.x_lo + t * (box.x_hi - box.x_lo), uc, vc});
        plan.base.push_back({xc, box.u_lo + t * (box.u_hi - box.u_lo), vc});
        plan.base.push_back({xc, uc, box.v_lo + t * (box.v_hi - box.v_lo)});
    }
    // Close partners along every axis at two scales, so kinks anywhere on the
    // sweep lattice blow up the ratio of a too-large exponent candidate.
    for (double rel : {1e-3, 1e-6}) {
        const double delta = rel * box.scale();
        for (const Point3& p : plan.base) {
            Point3 qx = p, qu = p, qv = p;
            qx.x = (p.x + delta <= box.x_hi) ? p.x + delta : p.x - delta;
            qu.u = (p.u + delta <= box.u_hi) ? p.u + delta : p.u - delta;
            qv.v = (p.v + delta <= box.v_hi) ? p.v + delta : p.v - delta;
            plan.close_pairs.emplace_back(p, qx);
            plan.close_pairs.emplace_back(p, qu);
            plan.close_pairs.emplace_back(p, qv);
        }
    }
    return plan;
}

struct RatioStats {
    double far_max = 0;
    double close_max = 0;
    double all_max = 0;
};

RatioStats ratios_for_alpha(const Lagrangian& L, const SamplePlan& plan, double alpha,
                            const std::vector<double>& base_vals) {
    RatioStats st;
    const size_t n = plan.base.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double d = l1_dist(plan.base[i], plan.base[j]);
            if (d <= 0) continue;
            const double r = std::abs(base_vals[i] - base_vals[j]) / std::pow(d, alpha);
            st.far_max = std::max(st.far_max, r);
        }
    for (const auto& [p, q] : plan.close_pairs) {
        const double d = l1_dist(p, q);
        if (d <= 0) continue;
        const double r =
            std::abs(evaluate(L, p.x, p.u, p.v) - evaluate(L, q.x, q.u, q.v)) /
            std::pow(d, alpha);
        st.close_max = std::max(st.close_max, r);
    }
    st.all_max = std::max(st.far_max, st.close_max);
    return st;
}

}  // namespace

HolderEstimate estimate_holder(const Lagrangian& L, const CompactBox& box, int n_samples,
                               std::uint64_t seed) {
    box.validate();
    if (n_samples < 2) throw Error("estimate_holder needs n_samples >= 2");

    const SamplePlan plan = build_plan(box, n_samples, seed);
    std::vector<double> base_vals;
    base_vals.reserve(plan.base.size());
    double val_scale = 0;
    for (const Point3& p : plan.base) {
        base_vals.push_back(evaluate(L, p.x, p.u, p.v));
        val_scale = std::max(val_scale, std::abs(base_vals.back()));
    }

    HolderEstimate est;
    est.box = box;
    est.sample_count = static_cast<int>(plan.base.size() + plan.close_pairs.size());
    const double tiny = 1e-12 * (1.0 + val_scale);
    for (double alpha : kAlphaLadder) {
        const RatioStats st = ratios_for_alpha(L, plan, alpha, base_vals);
        if (st.close_max <= kStabilityFactor * st.far_max + tiny) {
            est.alpha = alpha;
            est.C = kSafety * st.all_max;
            return est;
        }
    }
    // No ladder exponent is stable; keep the smallest with its observed C.
    const RatioStats st = ratios_for_alpha(L, plan, kAlphaLadder.back(), base_vals);
    est.alpha = kAlphaLadder.back();
    est.C = kSafety * st.all_max;
    return est;
}

bool holder_certificate_holds(const Lagrangian& L, const HolderEstimate& est,
                              std::uint64_t seed) {
    const SamplePlan plan = build_plan(est.box, std::max(2, est.sample_count / 2), seed);
    std::vector<double> vals;
    vals.reserve(plan.base.size());
    for (const Point3& p : plan.base) vals.push_back(evaluate(L, p.x, p.u, p.v));
    for (size_t i = 0; i < plan.base.size(); ++i)
        for (size_t j = i + 1; j < plan.base.size(); ++j) {
            const double d = l1_dist(plan.base[i], plan.base[j]);
            if (d <= 0) continue;
            if (std::abs(vals[i] - vals[j]) > est.C * std::pow(d, est.alpha) + 1e-12)
                return false;
        }
    for (const auto& [p, q] : plan.close_pairs) {
        const double d = l1_dist(p, q);
        if (d <= 0) continue;
        const double dl =
            std::abs(evaluate(L, p.x, p.u, p.v) - evaluate(L, q.x, q.u, q.v));
        if (dl > est.C * std::pow(d, est.alpha) + 1e-12) return false;
    }
    return true;
}

EllipticityCheck check_ellipticity(const Lagrangian& L, const CompactBox& box,
                                   int n_samples) {
    box.validate();
    if (n_samples < 1) throw Error("check_ellipticity needs n_samples >= 1");
    int m = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n_samples))));
    if (m < 3) m = 3;
    if (m % 2 == 0) ++m;  // odd counts so symmetric boxes sample their center
    EllipticityCheck out;
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const double x = box.x_lo + (box.x_hi - box.x_lo) * i / (m - 1);
                const double u = box.u_lo + (box.u_hi - box.u_lo) * j / (m - 1);
                const double v = box.v_lo + (box.v_hi - box.v_lo) * k / (m - 1);
                const double w = L.eval_vv(x, u, v);
                if (!std::isfinite(w)) throw NonFiniteError("L_vv not finite");
                lo = std::min(lo, w);
            }
    out.observed_min = lo;
    out.passes = lo >= L.mu;
    return out;
}

}  // namespace ovp
