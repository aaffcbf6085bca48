#include "pmld/jumps.hpp"

#include <algorithm>
#include <cmath>

#include "pmld/errors.hpp"
#include "pmld/stats.hpp"
#include "stepper.hpp"

namespace pmld {

JumpStream sample_prm(const MarkSpace& marks, double T, double rate_scale, Rng& rng) {
    if (!(T > 0.0)) throw InvalidArgumentError("horizon must be positive");
    if (rate_scale < 0.0) throw InvalidArgumentError("rate scale must be >= 0");
    JumpStream stream;
    if (rate_scale == 0.0) return stream;
    for (std::size_t j = 0; j < marks.size(); ++j) {
        const double rate = rate_scale * marks.weights[j];
        if (rate <= 0.0) continue;
        double t = rng.exponential(rate);
        while (t <= T) {
            stream.events.push_back(JumpEvent{t, j});
            t += rng.exponential(rate);
        }
    }
    std::stable_sort(stream.events.begin(), stream.events.end(),
                     [](const JumpEvent& a, const JumpEvent& b) { return a.t < b.t; });
    return stream;
}

JumpStream sample_controlled_prm(const MarkSpace& marks, double T, double eps,
                                 const ControlGrid& phi, double n_bound, Rng& rng,
                                 std::optional<std::size_t> n_compact) {
    if (!(eps > 0.0)) throw InvalidArgumentError("eps must be positive");
    if (!(n_bound >= 1.0)) throw InvalidArgumentError("n_bound must be >= 1");
    if (phi.m != marks.size()) throw DimensionMismatchError("phi grid marks mismatch mark space");
    const std::size_t compact = n_compact.value_or(marks.size());
    if (compact > marks.size()) throw InvalidArgumentError("compact prefix out of range");

    // The admissible class: phi <= n_bound on the compact prefix, phi = 1 off it.
    for (std::size_t i = 0; i < phi.n_t; ++i) {
        for (std::size_t j = 0; j < phi.m; ++j) {
            const double v = phi.at(i, j);
            if (j < compact) {
                if (v > n_bound) {
                    throw InvalidArgumentError("control exceeds the thinning bound on the compact");
                }
            } else if (v != 1.0) {
                throw InvalidArgumentError("control must equal 1 off the compact prefix");
            }
        }
    }

    const double base = 1.0 / eps;
    JumpStream stream;
    stream.eps = eps;
    stream.thinning_bound = n_bound;
    for (std::size_t j = 0; j < marks.size(); ++j) {
        const bool on_compact = j < compact;
        const double dominating = base * marks.weights[j] * (on_compact ? n_bound : 1.0);
        if (dominating <= 0.0) continue;
        double t = rng.exponential(dominating);
        while (t <= T) {
            if (on_compact) {
                const double accept = phi.at(phi.cell_of(t), j) / n_bound;
                if (rng.uniform() <= accept) stream.events.push_back(JumpEvent{t, j});
            } else {
                stream.events.push_back(JumpEvent{t, j});
            }
            t += rng.exponential(dominating);
        }
    }
    std::stable_sort(stream.events.begin(), stream.events.end(),
                     [](const JumpEvent& a, const JumpEvent& b) { return a.t < b.t; });
    return stream;
}

SpdeResult solve_spde_with_stream(const SkeletonProblem& problem, double eps,
                                  const JumpStream& stream, const SolverConfig& cfg,
                                  const SpdeOptions& options) {
    if (problem.x0.size() != problem.op.modes()) {
        throw DimensionMismatchError("initial state does not match operator modes");
    }
    if (!(eps > 0.0) || eps > 1.0) throw InvalidArgumentError("eps must lie in (0,1]");

    const detail::TrapezoidStepper stepper(problem.op, problem.psi, cfg, 0.0, 0.0);
    const std::size_t m = problem.marks.size();

    // Compensator drift -int_Z f(t,x,z) nu(dz); the control does not appear
    // because its tilt cancels against the controlled compensator.
    const detail::DriftFn drift = [&](double t, const SpectralField& x) {
        SpectralField d = zero_field(x.size());
        for (std::size_t j = 0; j < m; ++j) {
            axpy(-problem.marks.weights[j], eval_f(problem.fc, problem.marks, t, x, j), d);
        }
        return d;
    };

    const double dt = problem.T / static_cast<double>(cfg.n_t);
    SpdeResult result;
    result.traj.times.reserve(cfg.n_t + 1);
    result.traj.states.reserve(cfg.n_t + 1);
    result.traj.times.push_back(0.0);
    result.traj.states.push_back(problem.x0);
    result.jump_increment_sum = zero_field(problem.x0.size());

    SpectralField x = problem.x0;
    std::size_t next_event = 0;
    double t_cur = 0.0;
    for (std::size_t i = 0; i < cfg.n_t; ++i) {
        const double t_right = (i + 1 == cfg.n_t) ? problem.T : static_cast<double>(i + 1) * dt;
        while (next_event < stream.events.size() && stream.events[next_event].t <= t_right) {
            const JumpEvent& ev = stream.events[next_event];
            if (ev.t > t_cur) {
                stepper.advance(x, t_cur, ev.t - t_cur, drift);
                t_cur = ev.t;
            }
            // Left limit: the post-deterministic-step value just before the jump.
            SpectralField increment =
                scale(eps, eval_f(problem.fc, problem.marks, ev.t, x, ev.mark));
            if (options.record_jumps) {
                result.jumps.push_back(JumpRecord{ev.t, ev.mark, x, increment});
            }
            axpy(1.0, increment, result.jump_increment_sum);
            axpy(1.0, increment, x);
            ++next_event;
        }
        if (t_right > t_cur) {
            stepper.advance(x, t_cur, t_right - t_cur, drift);
            t_cur = t_right;
        }
        result.traj.times.push_back(t_right);
        result.traj.states.push_back(x);
    }
    return result;
}

SpdeResult solve_spde(const SkeletonProblem& problem, double eps,
                      const std::optional<ControlGrid>& phi, const SolverConfig& cfg, Rng& rng,
                      double n_bound, const SpdeOptions& options) {
    JumpStream stream;
    if (phi.has_value()) {
        stream = sample_controlled_prm(problem.marks, problem.T, eps, *phi, n_bound, rng);
    } else {
        stream = sample_prm(problem.marks, problem.T, 1.0 / eps, rng);
        stream.eps = eps;
    }
    return solve_spde_with_stream(problem, eps, stream, cfg, options);
}

ConditionBReport condition_b_experiment(const SkeletonProblem& problem, const ControlGrid& phi,
                                        double n_bound, const std::vector<double>& eps_list,
                                        std::size_t trials, const SolverConfig& cfg,
                                        std::uint64_t seed, ExecPolicy policy) {
    ConditionBReport report;
    std::vector<double> log_eps, log_est;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        const double eps = eps_list[e];
        const Trajectory skeleton = solve_skeleton(problem, phi, cfg);
        const auto sup_sq = map_indexed<double>(
            trials,
            [&](std::size_t p) {
                Rng rng(RngSpec{seed, (static_cast<std::uint64_t>(e) << 32) | p});
                const SpdeResult r = solve_spde(problem, eps, phi, cfg, rng, n_bound);
                const double d = sup_dual_distance(r.traj, skeleton, problem.op);
                return d * d;
            },
            policy);
        const auto [mean, se] = stats::mean_stderr(sup_sq);
        report.rows.push_back(ConditionBRow{eps, mean, se, trials});
        if (mean > 0.0) {
            log_eps.push_back(std::log(eps));
            log_est.push_back(std::log(mean));
        }
    }
    if (log_eps.size() >= 2) {
        report.loglog_slope = stats::linear_fit(log_eps, log_est).slope;
    }
    return report;
}

MeanPathReport mc_mean_path(const SkeletonProblem& problem, double eps, std::size_t trials,
                            const SolverConfig& cfg, std::uint64_t seed, ExecPolicy policy) {
    const auto paths = map_indexed<std::vector<SpectralField>>(
        trials,
        [&](std::size_t p) {
            Rng rng(RngSpec{seed, p});
            return solve_spde(problem, eps, std::nullopt, cfg, rng).traj.states;
        },
        policy);

    const std::size_t n_out = cfg.n_t + 1;
    const std::size_t K = problem.op.modes();
    MeanPathReport report;
    report.times.resize(n_out);
    const double dt = problem.T / static_cast<double>(cfg.n_t);
    for (std::size_t i = 0; i < n_out; ++i) report.times[i] = static_cast<double>(i) * dt;
    report.mean.assign(n_out, zero_field(K));
    report.stderr_.assign(n_out, zero_field(K));

    // Fixed-order reduction keeps the result independent of scheduling.
    for (std::size_t i = 0; i < n_out; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            double sum = 0.0;
            for (std::size_t p = 0; p < trials; ++p) sum += paths[p][i][k];
            const double mean = sum / static_cast<double>(trials);
            double var = 0.0;
            for (std::size_t p = 0; p < trials; ++p) {
                const double d = paths[p][i][k] - mean;
                var += d * d;
            }
            var /= static_cast<double>(trials - 1);
            report.mean[i][k] = mean;
            report.stderr_[i][k] = std::sqrt(var / static_cast<double>(trials));
        }
    }
    return report;
}

}  // namespace pmld
