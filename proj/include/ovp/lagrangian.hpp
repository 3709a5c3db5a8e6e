#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace ovp {

/// Integrand bundle L(x, u, v) with its v-derivatives and the ellipticity
/// floor mu (L_vv >= mu on working boxes). Derivatives not supplied by the
/// source fall back to central differences with step 1e-5*(1+|v|)
/// (reduced-accuracy mode, flagged by fd_derivatives).
struct Lagrangian {
    using Fn = std::function<double(double, double, double)>;

    Fn eval;
    Fn eval_v;
    Fn eval_vv;
    double mu = 0;
    std::string source;
    bool fd_derivatives = false;

    double operator()(double x, double u, double v) const { return eval(x, u, v); }
};

/// Wire a Lagrangian from evaluators; null derivative slots get the
/// finite-difference fallback.
Lagrangian make_lagrangian(Lagrangian::Fn eval, Lagrangian::Fn eval_v, Lagrangian::Fn eval_vv,
                           double mu, std::string source);

/// Checked evaluation: throws NonFiniteError on NaN/inf.
double evaluate(const Lagrangian& L, double x, double u, double v);

/// Axis-aligned compact box in (x, u, v) space.
struct CompactBox {
    double x_lo, x_hi;
    double u_lo, u_hi;
    double v_lo, v_hi;

    void validate() const;  // throws DegenerateBoxError unless lo < hi everywhere
    double scale() const;   // max side length
};

/// Empirical Hoelder certificate on a box: |L(p1) - L(p2)| <= C * d1(p1,p2)^alpha
/// over all sampled pairs (d1 = l1 distance in (x,u,v)).
struct HolderEstimate {
    double C = 0;
    double alpha = 1;
    CompactBox box{};
    int sample_count = 0;
};

/// Estimates (C, alpha): alpha is the largest exponent from the ladder
/// {1, 1/2, 1/3, 1/4} whose pair ratios stay stable between far and close
/// pairs; C is the max observed ratio inflated by the 1.1 safety factor.
/// Sampling is deterministic in `seed` (stratified points, all corners,
/// plus close-pair partners).
HolderEstimate estimate_holder(const Lagrangian& L, const CompactBox& box, int n_samples,
                               std::uint64_t seed = 2024);

/// Re-runs the sampling of `est` and checks the certificate on every pair.
bool holder_certificate_holds(const Lagrangian& L, const HolderEstimate& est,
                              std::uint64_t seed = 2024);

/// min over an inclusive lattice of eval_vv, compared against L.mu.
struct EllipticityCheck {
    bool passes = false;
    double observed_min = 0;
};
EllipticityCheck check_ellipticity(const Lagrangian& L, const CompactBox& box, int n_samples);

}  // namespace ovp
