#pragma once

#include <vector>

#include "ovp/grid_function.hpp"
#include "ovp/obstacles.hpp"

namespace ovp {

/// Exact discrete minimizer of sum (u_{i+1} - u_i)^2 / h subject to
/// f <= u <= g with pinned endpoints: ground truth for solve() on L = v^2.
/// Computed by a direct active-set method (per-arc linear interpolation plus
/// blocking-constraint / multiplier-sign exchanges) and certified against the
/// KKT conditions before returning; certification failure throws.
GridFunction taut_string_oracle(const ObstaclePair& pair, double A, double B, int n);

/// Least concave majorant of {(a,A), (b,B)} and the floor points: the taut
/// string when only the lower obstacle can bind. Used as an independent
/// cross-check of the oracle on single-sided problems.
GridFunction least_concave_majorant(const std::vector<double>& nodes,
                                    const std::vector<double>& floor_values, double A,
                                    double B);

}  // namespace ovp
