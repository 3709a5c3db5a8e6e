#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ovp/expression.hpp"
#include "ovp/lagrangian.hpp"
#include "ovp/obstacles.hpp"
#include "ovp/variational.hpp"

namespace ovp {

/// Parsed scenario file: line-oriented `key = value` with [section] headers,
/// '#' comments, UTF-8. Expression strings use the closed grammar with
/// variables x, u, v for the Lagrangian and x alone for the obstacles.
struct Scenario {
    // [problem]
    double a = 0, b = 1;
    double A = 0, B = 0;
    std::string lagrangian_expr;
    std::optional<std::string> lagrangian_v_expr, lagrangian_vv_expr;
    double mu = 0;
    std::string f_expr, g_expr;
    std::optional<std::string> f_prime_expr, g_prime_expr;
    double margin = 1e-9;

    // [solver]
    int n = 1001;
    double tol = 1e-8;
    long max_iter = 100000;
    std::uint64_t seed = 42;

    // [checks]
    int pairs_per_scale = 100;
    int scales = 10;
    std::vector<double> k_grid{0, 0.5, 1, 2, 4, 8, 16, 32};
    std::vector<double> eps_ladder;
    std::vector<double> thetas;
    std::vector<int> refinement_ladder{251, 501, 1001, 2001};

    // [sweep]
    std::string sweep_action = "solve";
    std::vector<std::pair<std::string, std::vector<std::string>>> sweep_params;

    // [output]
    std::string out_dir = "out";

    bool fd_warning = false;  // derivatives fell back to finite differences

    std::string source_path;
    std::string raw_text;
};

/// Parse and range-check a scenario file.
/// Throws ParseError (syntax, unknown identifier) or ValidationError (missing
/// or out-of-range field, named).
Scenario parse_scenario(const std::string& path);

/// Parse from an in-memory string (used by tests and sweep points).
Scenario parse_scenario_text(const std::string& text, const std::string& name = "<text>");

/// Instantiate the problem pieces from the parsed scenario.
Lagrangian build_lagrangian(const Scenario& sc);
ObstaclePair build_obstacles(const Scenario& sc);
ProblemSpec build_problem(const Scenario& sc);

}  // namespace ovp
