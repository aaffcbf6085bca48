// Times the OpenMP Monte Carlo kernels against the serial reference and
// checks that both produce identical numbers.

#include <chrono>
#include <cstdio>

#include "pmld/jumps.hpp"
#include "pmld/rate.hpp"

using namespace pmld;

namespace {

double run_seconds(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SkeletonProblem benchmark_problem() {
    SkeletonProblem p;
    p.op = make_operator_laplacian(8);
    p.psi = make_psi_stefan(1.0, 2.0, 0.4);
    p.marks = make_mark_space({0.0, 1.0}, {0.7, 0.3});
    p.fc = make_jump_coefficient(p.op, {1.0, 0.5}, BetaProfile{}, 0.2,
                                 SpectralField{{0.6, 0.0, 0.2, 0.0, 0.1, 0.0, 0.0, 0.0}});
    p.x0 = SpectralField{{0.8, 0.3, 0.1, 0.0, 0.05, 0.0, 0.0, 0.0}};
    p.T = 0.5;
    return p;
}

}  // namespace

int main() {
    const SkeletonProblem p = benchmark_problem();
    SolverConfig cfg;
    cfg.n_t = 200;
    const std::size_t trials = 400;

    std::printf("%-34s %10s %10s %8s %s\n", "kernel", "serial[s]", "openmp[s]", "speedup",
                "identical");

    {
        const ControlGrid phi = constant_control(20, 2, p.T, 1.0);
        ConditionBReport serial_rep, omp_rep;
        const double ts = run_seconds([&] {
            serial_rep = condition_b_experiment(p, phi, 1.0, {0.1, 0.05}, trials, cfg, 99,
                                                ExecPolicy::serial);
        });
        const double tp = run_seconds([&] {
            omp_rep = condition_b_experiment(p, phi, 1.0, {0.1, 0.05}, trials, cfg, 99,
                                             ExecPolicy::openmp);
        });
        bool same = true;
        for (std::size_t i = 0; i < serial_rep.rows.size(); ++i) {
            same = same && serial_rep.rows[i].estimate == omp_rep.rows[i].estimate;
        }
        std::printf("%-34s %10.3f %10.3f %8.2f %s\n", "condition-b path ensemble", ts, tp,
                    ts / tp, same ? "yes" : "NO");
    }

    {
        MeanPathReport serial_rep, omp_rep;
        const double ts = run_seconds(
            [&] { serial_rep = mc_mean_path(p, 0.1, 2 * trials, cfg, 98, ExecPolicy::serial); });
        const double tp = run_seconds(
            [&] { omp_rep = mc_mean_path(p, 0.1, 2 * trials, cfg, 98, ExecPolicy::openmp); });
        bool same = true;
        for (std::size_t i = 0; i < serial_rep.mean.size(); ++i) {
            for (std::size_t k = 0; k < 8; ++k) {
                same = same && serial_rep.mean[i][k] == omp_rep.mean[i][k];
            }
        }
        std::printf("%-34s %10.3f %10.3f %8.2f %s\n", "mean-path ensemble", ts, tp, ts / tp,
                    same ? "yes" : "NO");
    }

    {
        EventSpec ev;
        ev.observable = Observable::terminal_mode;
        ev.mode = 1;
        ev.threshold = 1.2;
        ev.direction = EventDirection::ge;
        RateOptions opt;
        opt.control_cells = 20;
        opt.n_starts = 2;
        opt.max_iters = 15;
        RateResult serial_res, omp_res;
        opt.policy = ExecPolicy::serial;
        const double ts = run_seconds([&] { serial_res = minimize_rate(ev, p, cfg, opt); });
        opt.policy = ExecPolicy::openmp;
        const double tp = run_seconds([&] { omp_res = minimize_rate(ev, p, cfg, opt); });
        const bool same = serial_res.q_star == omp_res.q_star;
        std::printf("%-34s %10.3f %10.3f %8.2f %s\n", "rate optimizer (fd probes)", ts, tp,
                    ts / tp, same ? "yes" : "NO");
    }

    return 0;
}
