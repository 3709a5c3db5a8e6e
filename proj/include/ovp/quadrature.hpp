#pragma once

#include <array>
#include <functional>
#include <vector>

namespace ovp {

/// Options for the singular integral  I(X) = ∫_{xi_min}^{X} m(ξ) dξ/ξ,
/// evaluated with the substitution ξ = e^t (so dξ/ξ = dt) and composite
/// Simpson on `panels` panels over t in [ln xi_min, ln X].
struct DiniQuadOptions {
    double xi_min = 1e-14;
    int panels = 2048;
    double tail_trust = 0.10;  // tail estimate over value above this is untrusted
};

struct DiniValue {
    double value = 0;
    double tail_estimate = 0;  // integral over one extra decade [xi_min/10, xi_min]
    bool trusted = true;       // tail_estimate <= tail_trust * value (or value ~ 0)
};

/// Raw integral, no tail bookkeeping.
double log_dini_integral(const std::function<double(double)>& m, double upper,
                         const DiniQuadOptions& opt = {});

/// Integral plus the one-extra-decade tail estimate.
DiniValue dini_integral_with_tail(const std::function<double(double)>& m, double upper,
                                  const DiniQuadOptions& opt = {});

/// Truncation-stability probe: recompute I(X) with xi_min in `ladder`
/// (decreasing). With d1 = I(x2)-I(x1), d2 = I(x3)-I(x2), non-contracting
/// increments (d2 >= ratio_threshold * d1) mean the inner limit diverges.
struct TruncationProbe {
    std::array<double, 3> xi_min{1e-6, 1e-9, 1e-12};
    std::array<double, 3> values{0, 0, 0};
    double d1 = 0;
    double d2 = 0;
    double ratio = 0;
    bool divergent = false;
};

TruncationProbe probe_truncation(const std::function<double(double)>& m, double upper,
                                 const std::array<double, 3>& xi_ladder = {1e-6, 1e-9, 1e-12},
                                 double ratio_threshold = 0.68, int panels = 2048);

/// Least-squares slope of log(y) vs log(x); returns {slope, r2}. Points with
/// y <= 0 are skipped. r2 = 1 on a perfect power law.
struct LogLogFit {
    double slope = 0;
    double r2 = 0;
    int points = 0;
};
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ovp
