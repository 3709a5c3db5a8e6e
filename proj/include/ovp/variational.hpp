#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ovp/grid_function.hpp"
#include "ovp/lagrangian.hpp"
#include "ovp/modulus.hpp"
#include "ovp/obstacles.hpp"

namespace ovp {

/// Discretized obstacle problem: minimize the midpoint-rule functional over
/// piecewise-linear u with u(a) = A, u(b) = B and f <= u <= g at the nodes.
struct ProblemSpec {
    double a, b;
    double A, B;
    Lagrangian lagrangian;
    ObstaclePair obstacles;
    int n = 1001;

    ProblemSpec(double a_, double b_, double A_, double B_, Lagrangian L,
                ObstaclePair obs, int n_);
};

/// Midpoint-rule energy: sum over cells of dx * L(x_mid, u(x_mid), slope).
/// Exact in the v-slot because u' is cell-constant.
double functional(const Lagrangian& L, const GridFunction& u);

/// Chord slope k_u(s, t) = (u(s) - u(t)) / (s - t), s < t.
double chord_slope(const GridFunction& u, double s, double t);

/// u overwritten by its chord on [s, t]; s, t inserted as nodes.
GridFunction linear_replace(const GridFunction& u, double s, double t);

/// Nodewise median(f, w, g) with crossing points inserted so the result is
/// exactly piecewise linear.
GridFunction clip_to_admissible(const GridFunction& w, const ObstaclePair& pair);

struct SolveOptions {
    double tol = 1e-8;      // relative: converged when kkt <= tol * (1 + |J|)
    long max_iter = 100000;
    std::uint64_t seed = 42;
};

struct SolveResult {
    GridFunction u;
    double energy = 0;
    long iterations = 0;
    double kkt_residual = 0;
    bool converged = false;
    std::vector<int> lower_active;  // nodes with u = f
    std::vector<int> upper_active;  // nodes with u = g
};

/// Projected gradient with projected-Newton acceleration on the free set.
/// Certifies KKT stationarity; global optimality only for jointly convex L.
SolveResult solve(const ProblemSpec& spec, const SolveOptions& opts = {});

/// (A1): the graph {(x_i, u_i)} stays inside the planar box.
bool check_A1(const GridFunction& u, double x_lo, double x_hi, double u_lo, double u_hi);

/// (A1) against the obstacle band {f <= u <= g} (feasibility, with slack).
bool check_A1_band(const GridFunction& u, const ObstaclePair& pair, double slack = 1e-12);

/// (A2): J_L(u) <= c.
bool check_A2(const GridFunction& u, const Lagrangian& L, double c);

/// (A3) sampling plan: dyadic scales delta0 / 2^j, j = 0 .. scales-1,
/// pairs_per_scale uniformly placed pairs per scale.
struct A3Plan {
    double delta0 = 0.1;  // tonelli_report substitutes the pipeline delta0 when <= 0
    int scales = 10;
    int pairs_per_scale = 100;
    std::uint64_t seed = 1;
    bool include_beyond_delta0 = false;  // extra diagnostic pairs, not in verdict
};

struct A3Violation {
    double s, t, slack;
};

struct A3Report {
    double j_u = 0;
    double min_slack = 0;
    double tol_quad = 0;
    int pairs_checked = 0;
    std::vector<A3Violation> violations;
    // Diagnostic-only results for |s-t| > delta0 (Remark-style extension).
    int beyond_pairs = 0;
    double beyond_min_slack = 0;
};

/// For sampled s < t with t - s <= delta0:
///   slack = J(u_{s,t}) + omega(|k_u(s,t)|, t-s) (t-s) - J(u),
/// violations are slacks below -tol_quad, tol_quad = 1e-6 (1 + |J(u)|).
A3Report check_A3(const GridFunction& u, const Lagrangian& L, const TwoArgModulus& omega,
                  const A3Plan& plan);

}  // namespace ovp
