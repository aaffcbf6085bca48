#include "pmld/rate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "pmld/errors.hpp"
#include "pmld/stats.hpp"

namespace pmld {

double observable_value(const EventSpec& event, const Trajectory& traj, const OperatorSpec& op) {
    if (traj.states.empty()) throw InvalidArgumentError("empty trajectory");
    switch (event.observable) {
        case Observable::terminal_dual_norm:
            return norm_dual(traj.states.back(), op);
        case Observable::terminal_mode: {
            if (event.mode < 1 || event.mode > op.modes()) {
                throw InvalidArgumentError("event mode index out of range");
            }
            return traj.states.back()[event.mode - 1];
        }
        case Observable::path_sup_dual: {
            double sup = 0.0;
            for (const auto& s : traj.states) sup = std::max(sup, norm_dual(s, op));
            return sup;
        }
    }
    return 0.0;
}

double event_violation(const EventSpec& event, const Trajectory& traj, const OperatorSpec& op) {
    const double value = observable_value(event, traj, op);
    if (event.direction == EventDirection::ge) return std::max(0.0, event.threshold - value);
    return std::max(0.0, value - event.threshold);
}

namespace {

struct Objective {
    const EventSpec& event;
    const SkeletonProblem& problem;
    const SolverConfig& cfg;
    std::size_t cells;
    std::size_t m;
    mutable std::atomic<std::size_t> evaluations{0};  // probes run in parallel

    ControlGrid to_control(const std::vector<double>& u) const {
        std::vector<double> values(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) values[i] = std::exp(u[i]);
        return make_control(cells, m, problem.T, std::move(values));
    }

    // F_rho(u) = Q(exp u) + rho * miss^2, plus the pieces for reporting.
    struct Value {
        double total;
        double cost;
        double miss;
    };

    Value eval(const std::vector<double>& u, double rho) const {
        ++evaluations;
        const ControlGrid g = to_control(u);
        const double cost = q_cost(g, problem.marks);
        const Trajectory traj = solve_skeleton(problem, g, cfg);
        const double miss = event_violation(event, traj, problem.op);
        return Value{cost + rho * miss * miss, cost, miss};
    }
};

// Gradient descent with Armijo backtracking; forward-difference gradient,
// probes evaluated in parallel.
void descend(const Objective& objective, std::vector<double>& u, double rho, int max_iters,
             double fd_step, ExecPolicy policy) {
    const std::size_t dim = u.size();
    double f0 = objective.eval(u, rho).total;
    for (int iter = 0; iter < max_iters; ++iter) {
        const auto grad = map_indexed<double>(
            dim,
            [&](std::size_t i) {
                std::vector<double> probe = u;
                probe[i] += fd_step;
                return (objective.eval(probe, rho).total - f0) / fd_step;
            },
            policy);
        double gnorm = 0.0;
        for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
        if (gnorm < 1e-9) break;

        double step = 1.0 / std::max(1.0, gnorm);
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls) {
            std::vector<double> trial = u;
            for (std::size_t i = 0; i < dim; ++i) trial[i] -= step * grad[i];
            const double f_trial = objective.eval(trial, rho).total;
            double decrease = 0.0;
            for (double g : grad) decrease += g * g;
            if (f_trial <= f0 - 1e-4 * step * decrease) {
                u = std::move(trial);
                f0 = f_trial;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
}

}  // namespace

RateResult minimize_rate(const EventSpec& event, const SkeletonProblem& problem,
                         const SolverConfig& cfg, const RateOptions& options) {
    if (options.control_cells < 1 || cfg.n_t % options.control_cells != 0) {
        throw InvalidArgumentError("control cells must divide the solver cells");
    }
    const std::size_t m = problem.marks.size();
    const std::size_t dim = options.control_cells * m;
    Objective objective{event, problem, cfg, options.control_cells, m};

    RateResult best;
    best.g_star = constant_control(options.control_cells, m, problem.T, 1.0);
    std::ostringstream trace;

    Rng start_rng(RngSpec{options.seed, 0});
    for (int s = 0; s < options.n_starts; ++s) {
        std::vector<double> u(dim, 0.0);
        if (s > 0) {
            for (double& v : u) v = options.start_spread * start_rng.normal();
        }
        for (double rho : options.penalties) {
            descend(objective, u, rho, options.max_iters, options.fd_step, options.policy);
            // Fully feasible already and the penalty inactive: larger rho is a no-op.
            if (objective.eval(u, rho).miss == 0.0) break;
        }
        const auto value = objective.eval(u, options.penalties.back());
        trace << "start " << s << ": cost " << value.cost << " miss " << value.miss << "\n";
        const bool feasible = value.miss <= options.feasibility_tol;
        if (feasible && (!best.feasible || value.cost < best.q_star)) {
            best.feasible = true;
            best.g_star = objective.to_control(u);
            best.q_star = q_cost(best.g_star, problem.marks);
            best.gap = value.miss;
        }
    }
    best.evaluations = objective.evaluations;
    best.trace = trace.str();
    return best;
}

McRareTable mc_rare_event(const EventSpec& event, const SkeletonProblem& problem,
                          const std::vector<double>& eps_list, std::size_t trials,
                          const SolverConfig& cfg, std::uint64_t seed, ExecPolicy policy) {
    if (trials < 1) throw InvalidArgumentError("trials must be >= 1");
    McRareTable table;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        const double eps = eps_list[e];
        const auto hits = map_indexed<int>(
            trials,
            [&](std::size_t p) {
                Rng rng(RngSpec{seed, (static_cast<std::uint64_t>(e) << 32) | p});
                const SpdeResult r = solve_spde(problem, eps, std::nullopt, cfg, rng);
                return event_violation(event, r.traj, problem.op) == 0.0 ? 1 : 0;
            },
            policy);
        std::size_t hit_count = 0;
        for (int h : hits) hit_count += static_cast<std::size_t>(h);
        McRareRow row;
        row.eps = eps;
        row.trials = trials;
        row.p_hat = static_cast<double>(hit_count) / static_cast<double>(trials);
        row.valid = hit_count > 0;
        if (row.valid) {
            row.eps_log_p = eps * std::log(row.p_hat);
            const double p_se =
                std::sqrt(row.p_hat * (1.0 - row.p_hat) / static_cast<double>(trials));
            row.stderr_ = eps * p_se / row.p_hat;
        }
        table.rows.push_back(row);
    }
    return table;
}

SlopeCompareReport ldp_slope_compare(const RateResult& rate, const McRareTable& table) {
    std::vector<double> xs, ys;
    for (const auto& row : table.rows) {
        if (row.valid) {
            xs.push_back(row.eps);
            ys.push_back(row.eps_log_p);
        }
    }
    if (xs.size() < 3) {
        throw InsufficientDataError("slope comparison needs >= 3 valid MC rows");
    }
    SlopeCompareReport report;
    report.extrapolated = stats::linear_fit(xs, ys).intercept;
    if (!rate.feasible) {
        report.comparable = false;
        return report;
    }
    report.comparable = true;
    report.minus_rate = -rate.q_star;
    report.relative_gap = std::abs(report.extrapolated - report.minus_rate) /
                          std::max(std::abs(rate.q_star), 1e-12);
    return report;
}

}  // namespace pmld
