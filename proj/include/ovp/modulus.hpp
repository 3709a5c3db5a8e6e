#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ovp/grid_function.hpp"

namespace ovp {

/// Tabulated modulus of continuity. Table rows (eps_j, omega_j) start at
/// (0, 0) and are nondecreasing in both coordinates. Evaluation rounds eps
/// up to the next table lag (upper-envelope step rule); past the last lag
/// the value clamps to the last omega_j and `clamps_at` reports it.
class Modulus {
  public:
    Modulus();  // identically zero
    Modulus(std::vector<double> lags, std::vector<double> values);

    double operator()(double eps) const;
    bool clamps_at(double eps) const { return eps > lags_.back(); }

    const std::vector<double>& lags() const { return lags_; }
    const std::vector<double>& table_values() const { return values_; }
    double max_value() const { return values_.back(); }
    bool is_zero() const;

    static Modulus zero() { return Modulus(); }

  private:
    std::vector<double> lags_;    // lags_[0] = 0
    std::vector<double> values_;  // values_[0] = 0
};

/// omega_j = max |h(x) - h(y)| over node pairs with |x - y| <= lag_j.
/// Lags must be positive and sorted ascending.
Modulus estimate_modulus(const GridFunction& h, std::span<const double> lags);

/// Log-spaced lag ladder for modulus estimation: `per_decade` points per
/// decade from `lo` up to and including `hi`.
std::vector<double> log_lag_ladder(double lo, double hi, int per_decade = 8);

/// Power-law envelope omega(eps) <= c * eps^sigma fitted to a table modulus:
/// sigma by log-log regression over the decaying range, then c inflated so
/// the envelope dominates every table row. Zero table gives c = 0.
struct PowerEnvelope {
    double c = 0;
    double sigma = 1;
    double operator()(double eps) const;
};
PowerEnvelope fit_power_envelope(const Modulus& m);

/// Two-argument modulus omega(k, eps): increasing in both arguments with
/// omega(k, 0) = 0. Wraps an arbitrary evaluator; the obstacle form builds
/// C0 [ (omega_f + omega_f' + k eps)^alpha0 + (omega_g + omega_g' + k eps)^alpha0 ].
class TwoArgModulus {
  public:
    TwoArgModulus();  // identically zero
    TwoArgModulus(std::function<double(double, double)> fn, std::string desc);

    double operator()(double k, double eps) const { return fn_(k, eps); }
    const std::string& description() const { return desc_; }

    static TwoArgModulus zero();
    static TwoArgModulus from_function(std::function<double(double, double)> fn,
                                       std::string desc = "custom");
    static TwoArgModulus obstacle_form(Modulus omega_f, Modulus omega_fp, Modulus omega_g,
                                       Modulus omega_gp, double c0, double alpha0);

    /// Monotonicity and omega(k,0)=0 on an (nk x ne) sample lattice.
    bool check_lattice(double k_max, double eps_max, int nk = 20, int ne = 20) const;

  private:
    std::function<double(double, double)> fn_;
    std::string desc_;
};

}  // namespace ovp
