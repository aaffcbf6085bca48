#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmld/control.hpp"
#include "pmld/jumps.hpp"
#include "pmld/rate.hpp"
#include "pmld/skeleton.hpp"

namespace pmld {

// Everything a CLI run needs, loaded from one JSON file. See README for the
// schema; unset optional sections keep library defaults.
struct RunConfig {
    SkeletonProblem problem;
    SolverConfig solver;
    ControlGrid control;          // aligned to solver.n_t
    std::optional<double> budget; // project the control into S^budget when set
    double eps = 0.1;
    std::optional<EventSpec> event;
    RateOptions rate_options;
    std::size_t trials = 1000;
    std::vector<double> eps_list = {0.2, 0.1, 0.05};
    double n_bound = 1.0;  // thinning bound for controlled sampling
};

RunConfig load_config(const std::string& path);

}  // namespace pmld
