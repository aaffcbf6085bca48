#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pmld/control.hpp"
#include "pmld/marks.hpp"
#include "pmld/parallel.hpp"
#include "pmld/rng.hpp"
#include "pmld/skeleton.hpp"

namespace pmld {

struct JumpEvent {
    double t = 0.0;
    std::size_t mark = 0;
};

// A time-ordered realization of a (controlled) Poisson random measure,
// together with the intensity descriptor it was sampled under.
struct JumpStream {
    std::vector<JumpEvent> events;
    double eps = 1.0;                          // noise scale (intensity nu/eps)
    std::optional<double> thinning_bound;      // set when control-thinned
};

// Homogeneous PRM on [0,T] x Z with intensity rate_scale * nu: per mark an
// exponential-interarrival process, merged and sorted.
JumpStream sample_prm(const MarkSpace& marks, double T, double rate_scale, Rng& rng);

// Controlled PRM by thinning: a dominating PRM at rate (1/eps)*n_bound*nu on
// the compact prefix K_{n_compact} (and (1/eps)*nu off it) keeps each point
// (t,z) with probability phi(t,z)/n_bound (resp. 1, where phi must be 1).
JumpStream sample_controlled_prm(const MarkSpace& marks, double T, double eps,
                                 const ControlGrid& phi, double n_bound, Rng& rng,
                                 std::optional<std::size_t> n_compact = std::nullopt);

struct JumpRecord {
    double t = 0.0;
    std::size_t mark = 0;
    SpectralField left_state;  // X(t-)
    SpectralField increment;   // eps * f(t, X(t-), z)
};

struct SpdeOptions {
    bool record_jumps = false;
};

struct SpdeResult {
    Trajectory traj;  // states at the uniform output times
    std::vector<JumpRecord> jumps;
    SpectralField jump_increment_sum;  // running total of applied increments
};

// Small-noise jump SPDE
//   dX = L psi(X) dt - [ int_Z f(t,X,z) nu(dz) ] dt + jumps of eps*f at the
// events of the (controlled) PRM. The continuous drift is the compensator
// and is independent of the control; the control enters through the jump
// intensity. Stepping is jump-adapted: uniform grid united with jump times.
SpdeResult solve_spde_with_stream(const SkeletonProblem& problem, double eps,
                                  const JumpStream& stream, const SolverConfig& cfg,
                                  const SpdeOptions& options = {});

// Convenience: samples the stream internally. phi defaults to the unit
// control (plain PRM).
SpdeResult solve_spde(const SkeletonProblem& problem, double eps,
                      const std::optional<ControlGrid>& phi, const SolverConfig& cfg, Rng& rng,
                      double n_bound = 1.0, const SpdeOptions& options = {});

struct ConditionBRow {
    double eps = 0.0;
    double estimate = 0.0;  // MC mean of sup_t ||X - Y||_dual^2
    double stderr_ = 0.0;
    std::size_t trials = 0;
};

struct ConditionBReport {
    std::vector<ConditionBRow> rows;
    double loglog_slope = 0.0;  // fitted slope of log(estimate) vs log(eps)
};

// For each eps: Y = deterministic flow with control phi, X = controlled SPDE
// with the same phi; Monte Carlo estimate of E sup_t ||X - Y||_dual^2 and a
// log-log slope fit across the eps ladder.
ConditionBReport condition_b_experiment(const SkeletonProblem& problem, const ControlGrid& phi,
                                        double n_bound, const std::vector<double>& eps_list,
                                        std::size_t trials, const SolverConfig& cfg,
                                        std::uint64_t seed,
                                        ExecPolicy policy = default_policy());

// MC mean trajectory of the SPDE (phi = 1) against per-mode standard errors,
// for compensation checks: returns mean and stderr per output time per mode.
struct MeanPathReport {
    std::vector<double> times;
    std::vector<SpectralField> mean;
    std::vector<SpectralField> stderr_;
};

MeanPathReport mc_mean_path(const SkeletonProblem& problem, double eps, std::size_t trials,
                            const SolverConfig& cfg, std::uint64_t seed,
                            ExecPolicy policy = default_policy());

}  // namespace pmld
