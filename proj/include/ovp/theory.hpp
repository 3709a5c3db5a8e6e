#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ovp/lagrangian.hpp"
#include "ovp/modulus.hpp"
#include "ovp/obstacles.hpp"
#include "ovp/quadrature.hpp"
#include "ovp/variational.hpp"

namespace ovp {

// ---- closed-form constants -------------------------------------------------

/// N = sqrt( (4/mu) c + M^2 (b-a) ).
double compute_N(double c, double mu, double m_growth, double length);

/// Largest delta0 with delta0 + N sqrt(delta0) <= 1, i.e. s^2 with
/// s = (-N + sqrt(N^2 + 4)) / 2.
double max_delta0(double N);

/// Positive root of (mu/4) z^2 - 2 c_k z - (2 c_k + omega_cap) = 0; for
/// |z| >= M_k the growth inequality holds.
double compute_M_k(double mu, double c_k, double omega_at_cap);

/// Smallest M (bisection over an upward-closed feasible set) such that
/// L(x, u, v) >= (mu/4) v^2 for all sampled |u| <= c1 and |v| in [M, m_cap].
/// Throws NoSuchMError if none exists below m_cap.
double compute_M_growth(const Lagrangian& L, double c1, double mu, double a, double b,
                        double m_cap = 1e6);

// ---- pipeline formulas -------------------------------------------------------

/// sqrt(2/mu) sqrt( 2 C1(k) eps^alpha(k) + omega(k, eps) ).
double delta1_bound(double k, double eps, double c1_k, double alpha_k, double mu,
                    const TwoArgModulus& omega);

/// C1(k) (eps + D1)^alpha(k) + 2 C2(k) D1 + omega(k, eps), D1 = delta1_bound.
double delta2_bound(double k, double eps, double c1_k, double alpha_k, double c2_k,
                    double mu, const TwoArgModulus& omega);

/// max{ D1(k, eps + N sqrt(eps)), (2/sqrt(mu)) sqrt(D2(k, eps + N sqrt(eps))) }.
double big_delta(double k, double eps, double N, double mu, double c1_k, double alpha_k,
                 double c2_k, const TwoArgModulus& omega);

/// omega_hat = sqrt( omega(k, eps + N sqrt(eps)) );
/// omega_bar = (sqrt omega_hat)^alpha(k) + sqrt omega_hat + omega_hat.
double omega_hat(double k, double eps, const TwoArgModulus& omega, double N);
double omega_bar(double k, double eps, const TwoArgModulus& omega, double alpha_k,
                 double N);

// ---- per-problem constants ---------------------------------------------------

struct PerKConstants {
    double k = 0;
    double c_k = 0;      // max(sup |L|, sup |L_v|) on K0 x [-k, k]
    double M_k = 0;      // growth root for this k
    double alpha_k = 1;  // Hoelder exponent on K0 x [-(k+M_k), k+M_k]
    double C1_k = 0;     // Hoelder constant on the same box
    double C2_k = 0;     // sup |L_v| on K x [-k, k]
};

struct TheoryOptions {
    std::vector<double> k_grid{0, 0.5, 1, 2, 4, 8, 16, 32};
    int holder_samples = 350;
    int band_samples = 41;  // per axis when sampling the bands
    std::uint64_t seed = 7;
};

struct TheoryConstants {
    double mu = 0;
    double c = 0;         // energy bound of (A2), usually |J(u)| + 1
    double c1 = 0;        // sup |u| over the band K
    double M_growth = 0;
    double N = 0;
    double delta0 = 0;
    double delta0_hat = 0;  // delta0 + N sqrt(delta0)
    double C0 = 0;          // Hoelder pair of L on [a,b] x [-M1,M1] x [-M2,M2]
    double alpha0 = 1;
    double K_u_lo = 0, K_u_hi = 0;    // bounding box of the band K
    double K0_u_lo = 0, K0_u_hi = 0;  // bounding box of the fattened band K0
    std::vector<PerKConstants> per_k;

    /// Row for the smallest grid k' >= k; clamps to the last row above the
    /// grid and reports it through `extrapolated`.
    const PerKConstants& row_for(double k, bool* extrapolated = nullptr) const;
    double k_grid_max() const { return per_k.back().k; }
};

/// Builds the full pipeline constants for a problem. `energy` is J_L(u) of
/// the solution under study (c = |energy| + 1 per the membership lemma).
TheoryConstants build_theory_constants(const ProblemSpec& spec, double energy,
                                       const TheoryOptions& opt = {});

// ---- the delta pipeline -------------------------------------------------------

struct LittleDeltaOptions {
    double eta_cap = 1e3;
    double rel_tol = 1e-10;
    int max_iter = 500;
    DiniQuadOptions quad{};
};

struct LittleDeltaResult {
    double value = std::numeric_limits<double>::infinity();
    bool finite = false;
    bool converged = false;
    bool diverged_integral = false;  // the Dini integral itself diverges
    bool k_extrapolated = false;
    int iterations = 0;
    double residual = 0;
};

/// Least fixed point of eta -> 4 * integral_0^{e eps} Delta(k + eta, xi) dxi/xi
/// by monotone Picard iteration from 0 (the infimum of A_{k,eps} is attained,
/// so the converged value is the reported delta). Infinity above eta_cap.
LittleDeltaResult little_delta(const std::function<double(double, double)>& Delta,
                               double k, double eps, const LittleDeltaOptions& opt = {});

struct DeltaSample {
    double value = std::numeric_limits<double>::infinity();
    bool finite = false;
    bool extrapolated = false;
};

class DeltaPipeline {
  public:
    DeltaPipeline(TheoryConstants tc, TwoArgModulus omega);

    const TheoryConstants& constants() const { return tc_; }
    const TwoArgModulus& omega() const { return omega_; }
    double eta0() const { return eta0_; }

    double delta1(double k, double eps) const;
    double delta2(double k, double eps) const;
    double Delta(double k, double eps) const;
    double omega_hat_at(double k, double eps) const;
    double omega_bar_at(double k, double eps) const;

    LittleDeltaResult little_delta_at(double k, double eps,
                                      const LittleDeltaOptions& opt = {}) const;

    /// delta/Delta as flagged samples for the P3 / energy harnesses.
    DeltaSample delta_sample(double k, double eps) const;
    DeltaSample Delta_sample(double k, double eps) const;
    std::function<DeltaSample(double, double)> delta_map() const;
    std::function<DeltaSample(double, double)> Delta_map() const;

    /// Largest ladder eps at which Picard converged below eta_cap.
    double eps0_for(double k, std::span<const double> eps_ladder,
                    const LittleDeltaOptions& opt = {}) const;

  private:
    TheoryConstants tc_;
    TwoArgModulus omega_;
    double eta0_ = 1.0;
};

// ---- hypothesis and property checks -------------------------------------------

struct HTestEntry {
    double k = 0;
    DiniLadder ladder;
};

/// (H): decay of the omega_bar Dini integral per k on the grid.
std::vector<HTestEntry> hypothesis_H_test(const DeltaPipeline& pipe,
                                          std::span<const double> k_grid,
                                          std::span<const double> eps_ladder,
                                          const DiniOptions& opt = {});

struct P2Report {
    double k = 0;
    double c_fit = 0;
    double exponent = 0;  // (1/4) min(alpha, alpha^2)
    std::vector<double> eps, delta_values, bounds;
    int infinite_deltas = 0;
    bool inequality_ok = false;
    bool limit_ok = false;
    bool hypothesis_flag = false;  // delta infinite somewhere: (H) violated at scale
};

/// delta(k, eps) <= C(k) [ (sqrt eps)^{(1/4) min(alpha, alpha^2)}
///                         + int_0^{e eps} omega_bar(k + eta0, xi) dxi/xi ],
/// with C(k) calibrated at the largest ladder point when c_fit <= 0; also
/// verifies the decaying-ladder limit delta(k, eps) -> 0.
P2Report check_P2(const DeltaPipeline& pipe, double k, std::span<const double> eps_ladder,
                  double c_fit = 0, double eta0 = 1.0,
                  const LittleDeltaOptions& opt = {});

struct P3Plan {
    double max_width = 0.01;  // delta0 / e
    int scales = 6;
    int pairs_per_scale = 30;
    int inner_per_outer = 4;
    std::uint64_t seed = 11;
};

struct P3Report {
    int checked = 0;
    int vacuous = 0;       // infinite delta entries
    int extrapolated = 0;  // k beyond the tabulated grid
    int violations = 0;
    double max_ratio = 0;  // max |k_out - k_in| / delta over finite entries
    double worst_lhs = 0;
};

/// (P3): |k_u(x1,x2) - k_u(s,t)| <= delta(|k_u(x1,x2)|, x2 - x1) over nested
/// sampled pairs.
P3Report check_P3(const GridFunction& u,
                  const std::function<DeltaSample(double, double)>& delta_map,
                  const P3Plan& plan);

struct EnergyCheck {
    double y = 0, z = 0;
    double chord = 0;
    double threshold = 0;  // Delta(|k|, z - y)
    double lhs = 0;        // integral over Omega of |u' - k|^2
    double rhs = 0;        // Delta^2 * (z - y)
    double slack = 0;      // rhs - lhs
    double omega_measure = 0;
    bool vacuous = false;  // Omega empty
    bool extrapolated = false;
};

/// Energy estimate on one pair (y, z), cells within [y, z] after node insertion.
EnergyCheck check_energy_estimate(const GridFunction& u, double y, double z,
                                  const std::function<DeltaSample(double, double)>& Delta_map);

struct EnergySuite {
    int checked = 0;
    int vacuous = 0;
    int extrapolated = 0;
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
};

EnergySuite energy_estimate_suite(const GridFunction& u,
                                  const std::function<DeltaSample(double, double)>& Delta_map,
                                  const P3Plan& plan);

// ---- tabulation ----------------------------------------------------------------

/// (k, eps) tables with the monotone envelope applied (running maxima in both
/// arguments). delta entries may be +infinity.
struct PipelineTable {
    std::vector<double> ks;
    std::vector<double> eps_delta;  // [0, delta0/e] lattice for delta
    std::vector<double> eps_big;    // [0, delta0] lattice for Delta
    std::vector<std::vector<double>> delta1, delta2, big, omega_bar_tab, little;
};

PipelineTable tabulate_pipeline(const DeltaPipeline& pipe, int nk = 20, int ne = 20,
                                const LittleDeltaOptions& opt = {});

/// Exact nondecreasing-in-both-arguments check (infinities allowed).
bool table_is_monotone(const std::vector<std::vector<double>>& t);

}  // namespace ovp
