#include <doctest.h>

#include <cmath>

#include "pmld/jumps.hpp"
#include "pmld/parallel.hpp"

using namespace pmld;

TEST_CASE("OpenMP kernel matches the serial reference bit for bit") {
    const auto work = [](std::size_t i) {
        double acc = static_cast<double>(i) + 0.5;
        for (int k = 0; k < 100; ++k) acc = std::sqrt(acc) + std::sin(acc);
        return acc;
    };
    const auto serial = map_indexed_serial<double>(512, work);
    const auto parallel = map_indexed<double>(512, work, ExecPolicy::openmp);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("Monte Carlo estimates are scheduling-independent") {
    SkeletonProblem p;
    p.op = make_operator_laplacian(2);
    p.psi = make_psi_linear(1.0);
    p.marks = make_mark_space({0.0}, {1.0});
    p.fc = make_jump_coefficient(p.op, {1.0}, BetaProfile{}, 0.0, SpectralField{{1.0, -0.5}});
    p.x0 = zero_field(2);
    p.T = 0.5;
    SolverConfig cfg;
    cfg.n_t = 50;
    const ControlGrid phi = constant_control(10, 1, p.T, 1.0);

    const ConditionBReport serial =
        condition_b_experiment(p, phi, 1.0, {0.2, 0.1}, 100, cfg, 300, ExecPolicy::serial);
    const ConditionBReport parallel =
        condition_b_experiment(p, phi, 1.0, {0.2, 0.1}, 100, cfg, 300, ExecPolicy::openmp);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].estimate == parallel.rows[i].estimate);
        CHECK(serial.rows[i].stderr_ == parallel.rows[i].stderr_);
    }

    const MeanPathReport ms = mc_mean_path(p, 0.1, 200, cfg, 301, ExecPolicy::serial);
    const MeanPathReport mp = mc_mean_path(p, 0.1, 200, cfg, 301, ExecPolicy::openmp);
    for (std::size_t i = 0; i < ms.mean.size(); ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(ms.mean[i][k] == mp.mean[i][k]);
            CHECK(ms.stderr_[i][k] == mp.stderr_[i][k]);
        }
    }
}
