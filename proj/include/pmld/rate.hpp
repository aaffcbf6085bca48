#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pmld/jumps.hpp"
#include "pmld/parallel.hpp"
#include "pmld/skeleton.hpp"

namespace pmld {

enum class Observable {
    terminal_dual_norm,  // ||X(T)||_dual
    terminal_mode,       // coefficient of one mode at T
    path_sup_dual,       // sup_t ||X(t)||_dual
};

enum class EventDirection { ge, le };

struct EventSpec {
    Observable observable = Observable::terminal_mode;
    std::size_t mode = 1;  // 1-based mode index for terminal_mode
    double threshold = 0.0;
    EventDirection direction = EventDirection::ge;
};

double observable_value(const EventSpec& event, const Trajectory& traj, const OperatorSpec& op);
// Nonnegative miss distance; zero when the trajectory realizes the event.
double event_violation(const EventSpec& event, const Trajectory& traj, const OperatorSpec& op);

struct RateOptions {
    std::size_t control_cells = 16;   // time cells of the optimized control
    int n_starts = 4;
    int max_iters = 60;               // gradient iterations per penalty stage
    std::vector<double> penalties = {1e1, 1e2, 1e3, 1e4};
    double fd_step = 1e-4;            // forward-difference step in u (g = exp u)
    double feasibility_tol = 1e-3;
    double start_spread = 0.3;        // stddev of random start perturbations
    std::uint64_t seed = 5;
    ExecPolicy policy = default_policy();
};

struct RateResult {
    ControlGrid g_star;
    double q_star = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();  // event miss at g_star
    bool feasible = false;
    std::size_t evaluations = 0;
    std::string trace;  // per-start summary lines
};

// Upper bound on the rate of an event: minimize Q(exp(u)) plus a quadratic
// penalty on the event miss of the deterministic flow driven by g = exp(u),
// multi-started, with forward finite-difference gradients. Infeasible events
// keep the +infinity sentinel.
RateResult minimize_rate(const EventSpec& event, const SkeletonProblem& problem,
                         const SolverConfig& cfg, const RateOptions& options);

struct McRareRow {
    double eps = 0.0;
    double p_hat = 0.0;
    double eps_log_p = 0.0;
    double stderr_ = 0.0;  // of eps*log(p_hat), delta method
    std::size_t trials = 0;
    bool valid = false;  // p_hat > 0
};

struct McRareTable {
    std::vector<McRareRow> rows;
};

// Plain-noise rare-event probabilities: fraction of SPDE paths realizing the
// event, with eps*log(p_hat) and its propagated standard error.
McRareTable mc_rare_event(const EventSpec& event, const SkeletonProblem& problem,
                          const std::vector<double>& eps_list, std::size_t trials,
                          const SolverConfig& cfg, std::uint64_t seed,
                          ExecPolicy policy = default_policy());

struct SlopeCompareReport {
    double minus_rate = 0.0;        // -q_star
    double extrapolated = 0.0;      // eps*log(p_hat) extrapolated to eps = 0
    double relative_gap = 0.0;
    bool comparable = false;        // false when the rate result was infeasible
};

// Linear extrapolation of eps*log(p_hat) to eps = 0 against -q_star.
// Needs at least three valid MC rows.
SlopeCompareReport ldp_slope_compare(const RateResult& rate, const McRareTable& table);

}  // namespace pmld
