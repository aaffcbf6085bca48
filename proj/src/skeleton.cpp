#include "pmld/skeleton.hpp"

#include <cmath>

#include "pmld/errors.hpp"
#include "stepper.hpp"

namespace pmld {

namespace {

void validate(const SkeletonProblem& problem, const ControlGrid& g, const SolverConfig& cfg) {
    if (problem.x0.size() != problem.op.modes()) {
        throw DimensionMismatchError("initial state does not match operator modes");
    }
    for (double c : problem.x0.coeffs) {
        if (!std::isfinite(c)) throw InvalidArgumentError("initial state must be finite");
    }
    if (!(problem.T > 0.0)) throw InvalidArgumentError("horizon T must be positive");
    if (cfg.n_t < 1) throw InvalidArgumentError("n_t must be >= 1");
    if (!(cfg.fp_tol > 0.0)) throw InvalidArgumentError("fp_tol must be positive");
    if (!(cfg.relax > 0.0) || cfg.relax > 1.0) throw InvalidArgumentError("relax must lie in (0,1]");
    if (g.m != problem.marks.size()) {
        throw DimensionMismatchError("control grid does not match the mark space");
    }
    if (cfg.n_t % g.n_t != 0) {
        throw InvalidArgumentError("control cells must align with solver cells");
    }
}

}  // namespace

Trajectory solve_regularized(const SkeletonProblem& problem, const ControlGrid& g,
                             const SolverConfig& cfg, double eps, double delta) {
    validate(problem, g, cfg);
    if (eps < 0.0 || delta < 0.0) throw InvalidArgumentError("eps and delta must be >= 0");

    const detail::TrapezoidStepper stepper(problem.op, problem.psi, cfg, eps, delta);
    const std::size_t m = problem.marks.size();

    // Control-tilted mean drift int_Z f(t,x,z)(g-1) nu(dz), left endpoint.
    const detail::DriftFn drift = [&](double t, const SpectralField& x) {
        SpectralField d = zero_field(x.size());
        const std::size_t cell = g.cell_of(t);
        for (std::size_t j = 0; j < m; ++j) {
            const double tilt = g.at(cell, j) - 1.0;
            if (tilt == 0.0) continue;
            axpy(tilt * problem.marks.weights[j], eval_f(problem.fc, problem.marks, t, x, j), d);
        }
        return d;
    };

    const double dt = problem.T / static_cast<double>(cfg.n_t);
    Trajectory traj;
    traj.times.reserve(cfg.n_t + 1);
    traj.states.reserve(cfg.n_t + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(problem.x0);
    if (cfg.track_psi_integral) {
        traj.psi_integral.reserve(cfg.n_t + 1);
        traj.psi_integral.push_back(zero_field(problem.x0.size()));
    }

    SpectralField x = problem.x0;
    SpectralField psi_prev;
    if (cfg.track_psi_integral) psi_prev = stepper.apply_psi_planned(x);
    double t_cur = 0.0;
    for (std::size_t i = 0; i < cfg.n_t; ++i) {
        // Same grid arithmetic as the jump solver so that the noiseless
        // degeneracy is bit-exact.
        const double t_right =
            (i + 1 == cfg.n_t) ? problem.T : static_cast<double>(i + 1) * dt;
        stepper.advance(x, t_cur, t_right - t_cur, drift);
        t_cur = t_right;
        traj.times.push_back(t_right);
        traj.states.push_back(x);
        if (cfg.track_psi_integral) {
            SpectralField psi_cur = stepper.apply_psi_planned(x);
            SpectralField acc = traj.psi_integral.back();
            axpy(0.5 * dt, psi_prev, acc);
            axpy(0.5 * dt, psi_cur, acc);
            traj.psi_integral.push_back(std::move(acc));
            psi_prev = std::move(psi_cur);
        }
    }
    return traj;
}

Trajectory solve_skeleton(const SkeletonProblem& problem, const ControlGrid& g,
                          const SolverConfig& cfg) {
    return solve_regularized(problem, g, cfg, 0.0, 0.0);
}

AprioriReport apriori_report(const Trajectory& traj, const SpectralField& x0, double T,
                             double c_l3) {
    if (traj.states.empty()) throw InvalidArgumentError("empty trajectory");
    AprioriReport report;
    for (const auto& state : traj.states) {
        const double n = norm_l2(state);
        report.sup_l2_sq = std::max(report.sup_l2_sq, n * n);
    }
    report.c_l3 = c_l3;
    const double x0_sq = norm_l2(x0) * norm_l2(x0);
    const double exponent = 8.0 * c_l3 * c_l3 + 4.0 * T;
    report.bound_value = (2.0 * x0_sq + exponent) * std::exp(exponent);
    report.bound_ok = report.sup_l2_sq <= report.bound_value;
    return report;
}

AprioriReport apriori_report(const Trajectory& traj, const SkeletonProblem& problem,
                             const ControlGrid& g) {
    const double c_l3 = integrate_h(3, problem.fc, problem.marks, g);
    return apriori_report(traj, problem.x0, problem.T, c_l3);
}

double sup_dual_distance(const Trajectory& a, const Trajectory& b, const OperatorSpec& op) {
    if (a.states.size() != b.states.size()) {
        throw DimensionMismatchError("trajectories have different output grids");
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        sup = std::max(sup, norm_dual(sub(a.states[i], b.states[i]), op));
    }
    return sup;
}

ContinuityReport continuity_experiment(const SkeletonProblem& problem,
                                       const std::vector<ControlGrid>& g_seq,
                                       const ControlGrid& g_limit, const SolverConfig& cfg) {
    ContinuityReport report;
    const Trajectory limit = solve_skeleton(problem, g_limit, cfg);
    report.distances.reserve(g_seq.size());
    for (const auto& g : g_seq) {
        const Trajectory traj = solve_skeleton(problem, g, cfg);
        report.distances.push_back(sup_dual_distance(traj, limit, problem.op));
    }
    return report;
}

}  // namespace pmld
