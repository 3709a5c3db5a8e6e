#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ovp/grid_function.hpp"
#include "ovp/modulus.hpp"
#include "ovp/quadrature.hpp"

namespace ovp {

/// Obstacle pair f < g on [a, b]. Holds grid representations at the solver
/// resolution plus a 10x finer grid used for modulus estimation, and the
/// closed forms (with derivatives) when available. Construction rejects
/// pairs violating f + margin <= g at the fine nodes and computes
///   M2 = max(||f'||_inf, ||g'||_inf),  M1 = max(||f||_inf, ||g||_inf) + M2 (b-a).
class ObstaclePair {
  public:
    using Fn1 = std::function<double(double)>;

    /// From closed forms; null derivatives fall back to central differences.
    static ObstaclePair from_functions(double a, double b, Fn1 f, Fn1 g, Fn1 f_prime,
                                       Fn1 g_prime, int n_grid, double margin = 1e-9,
                                       int refine = 10);

    /// From existing grid functions (derivatives are cell slopes).
    static ObstaclePair from_grids(GridFunction f, GridFunction g, double margin = 1e-9);

    double a() const { return f_grid_.a(); }
    double b() const { return f_grid_.b(); }
    double margin() const { return margin_; }
    double M1() const { return M1_; }
    double M2() const { return M2_; }

    const GridFunction& f() const { return f_grid_; }
    const GridFunction& g() const { return g_grid_; }
    const GridFunction& f_fine() const { return f_fine_; }
    const GridFunction& g_fine() const { return g_fine_; }

    double f_at(double x) const { return f_fn_ ? f_fn_(x) : f_grid_(x); }
    double g_at(double x) const { return g_fn_ ? g_fn_(x) : g_grid_(x); }

    /// Moduli of f, f', g, g' estimated on the fine grid over `lags`
    /// (default: log ladder from the fine spacing up to b - a).
    struct Moduli {
        Modulus f, f_prime, g, g_prime;
        const Modulus& by_name(const std::string& h) const;
    };
    Moduli estimate_moduli(std::span<const double> lags = {}) const;

  private:
    GridFunction f_grid_, g_grid_, f_fine_, g_fine_;
    GridFunction fp_fine_, gp_fine_;  // derivative samples on the fine grid
    Fn1 f_fn_, g_fn_;
    double margin_ = 0, M1_ = 0, M2_ = 0;

    ObstaclePair(GridFunction f, GridFunction g, GridFunction ff, GridFunction gf,
                 GridFunction fpf, GridFunction gpf, Fn1 ffn, Fn1 gfn, double margin);
    void finish_construction();
};

/// Eq.-style obstacle modulus built from the four moduli and the Hoelder
/// pair (C0, alpha0) of L on [a,b] x [-M1,M1] x [-M2,M2]:
///   omega(k,eps) = C0 [ (w_f + w_f' + k eps)^a0 + (w_g + w_g' + k eps)^a0 ].
TwoArgModulus obstacle_omega(const ObstaclePair& pair, double c0, double alpha0,
                             std::span<const double> lags = {});

enum class DiniVerdict { pass, fail, inconclusive };
std::string to_string(DiniVerdict v);

/// One Dini ladder: values[i] = integral over [xi_min, e*eps_i] of
/// [omega(xi + gamma sqrt(xi))]^theta dxi/xi, with decay/divergence verdict.
struct DiniLadder {
    std::vector<double> eps;
    std::vector<double> values;
    std::vector<bool> trusted;
    TruncationProbe probe;         // xi_min stability at the largest eps
    double fitted_slope = 0;       // log-log slope of values vs eps
    double fit_r2 = 0;
    bool decreasing = false;
    bool all_zero = false;
    DiniVerdict verdict = DiniVerdict::inconclusive;
    std::string note;
};

struct DiniOptions {
    DiniQuadOptions quad{};
    double ratio_certificate = 0.10;  // terminal < ratio * first
    double slope_floor = 0.005;       // fitted decay slope regarded as real
    double slope_r2_floor = 0.90;
    double divergence_ratio = 0.68;   // truncation-probe threshold
    bool throw_on_underflow = true;
};

/// Core Dini test on an arbitrary scalar modulus evaluator.
DiniLadder dini_test(const std::function<double(double)>& omega_h, double gamma,
                     double theta, std::span<const double> eps_ladder,
                     const DiniOptions& opt = {});

DiniLadder dini_test(const Modulus& omega_h, double gamma, double theta,
                     std::span<const double> eps_ladder, const DiniOptions& opt = {});

/// Condition suite over h in {f, f', g, g'} and the required exponents; the
/// Dini integrands use power-law envelopes fitted to the estimated moduli
/// (the Hoelder-obstacle reduction), plus the closed-form power bound check
///   int_0^{e eps} (xi + N sqrt(xi))^beta dxi/xi
///     <= C [ (e eps)^beta / beta + 2 N^beta (e eps)^{beta/2} / beta ].
struct Condition12Entry {
    std::string h;
    double theta = 0;
    double sigma = 0;            // fitted envelope exponent (0 for zero modulus)
    double analytic_exponent = 0;  // expected ladder decay slope
    DiniLadder ladder;
};

struct PowerBoundCheck {
    double beta = 0;
    double integral = 0;
    double majorant = 0;
    bool holds = false;
};

struct Condition12Report {
    std::vector<Condition12Entry> entries;
    std::vector<PowerBoundCheck> power_bounds;
    DiniVerdict verdict = DiniVerdict::inconclusive;  // pass iff everything passes
};

struct Condition12Options {
    std::vector<double> thetas;              // required exponents; empty -> {1/4, 1/2}
    std::vector<double> betas{0.1, 0.5, 1.0};
    std::vector<double> eps_ladder;          // empty -> default ladder
    DiniOptions dini{};
    // Known closed-form moduli by component name ("f", "f'", "g", "g'").
    // When present they replace the fitted envelope for that component; a
    // data-estimated table cannot represent non-Dini behavior below the grid
    // resolution, a known modulus can.
    std::map<std::string, std::function<double(double)>> moduli_override;
};

Condition12Report condition_1_2_suite(const ObstaclePair& pair, double N,
                                      const Condition12Options& opt = {});

}  // namespace ovp
