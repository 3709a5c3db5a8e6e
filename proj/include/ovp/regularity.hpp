#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ovp/grid_function.hpp"
#include "ovp/modulus.hpp"
#include "ovp/theory.hpp"
#include "ovp/variational.hpp"

namespace ovp {

/// Cell slopes of u (the discrete u').
std::vector<double> discrete_derivative(const GridFunction& u);

/// A location whose local max |slope| keeps growing under refinement:
/// the finite-grid proxy for u' = +/-inf. `growth` holds per-level window
/// maxima of |u'| near x; flagged when the finest-to-coarsest ratio reaches
/// the growth factor and every refinement step grows.
struct SingularCandidate {
    double x = 0;
    std::vector<double> level_max_slope;
    double total_growth = 0;
};

struct SingularOptions {
    double growth_factor = 1.8;    // finest/coarsest window-max ratio to flag
    double per_level_floor = 1.02; // every consecutive level must grow at least this
    double cluster_radius = 0;     // 0: 3 * coarsest grid spacing
    SolveOptions solve{};
};

/// Refinement-ladder scan on solver outputs.
std::vector<SingularCandidate> singular_candidates(const ProblemSpec& spec,
                                                   std::span<const int> ladder,
                                                   const SingularOptions& opt = {});

/// Same scan on a manufactured profile (bypasses the solver).
std::vector<SingularCandidate> singular_candidates_profile(
    const std::function<double(double)>& profile, double a, double b,
    std::span<const int> ladder, const SingularOptions& opt = {});

/// Modulus of continuity of the cell-slope sequence (slopes at midpoints).
Modulus derivative_modulus(const GridFunction& u, std::span<const double> lags);

/// Aggregate report per Definition-style diagnostics.
struct RegularityReport {
    bool a1_ok = false;
    bool a2_ok = false;
    A3Report a3;
    P3Report p3;
    EnergySuite energy_est;
    std::vector<HTestEntry> dini_h;           // omega_bar decay per k
    Condition12Report dini_obstacles;         // condition suite on f, f', g, g'
    std::vector<SingularCandidate> singular_candidates;
    Modulus derivative_mod;
    double energy = 0;
    double n_bound = 0;        // N with c = |J| + 1
    double slope_l2 = 0;       // discrete ||u'||_2
    std::vector<std::string> verdict_notes;
    bool partial = false;      // a component failed and was skipped

    bool violations_present() const {
        return !a3.violations.empty() || p3.violations > 0 || energy_est.violations > 0;
    }
};

struct ReportOptions {
    A3Plan a3{};
    P3Plan p3{};
    std::vector<int> refinement_ladder{251, 501, 1001, 2001};
    std::vector<double> k_grid{0, 0.5, 1, 2, 4, 8, 16, 32};
    std::vector<double> eps_ladder;  // empty: default geometric ladder
    std::vector<double> thetas;      // extra condition-suite exponents
    SingularOptions singular{};
    std::uint64_t seed = 42;
};

/// Runs every diagnostic on a solved problem. Component failures are caught,
/// recorded in verdict_notes and leave the report flagged partial.
RegularityReport tonelli_report(const ProblemSpec& spec, const SolveResult& sol,
                                const TheoryConstants& tc, const DeltaPipeline& pipe,
                                const ReportOptions& opt = {});

}  // namespace ovp
