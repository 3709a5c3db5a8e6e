#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ovp/scenario.hpp"

namespace ovp {

struct RunFlags {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::optional<double> inject_perturbation;
    std::string command_line;
};

/// Exit codes: 0 success, 1 usage, 2 parse/validation, 3 solver
/// non-convergence, 4 check violations present (verify).
int run_subcommand(const std::string& name, const std::string& scenario_path,
                   const RunFlags& flags);

/// Same, on an already-parsed scenario (used by sweep and tests).
int run_on_scenario(const std::string& name, const Scenario& scenario,
                    const RunFlags& flags);

}  // namespace ovp
