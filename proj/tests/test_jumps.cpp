#include <doctest.h>

#include <cmath>

#include "pmld/errors.hpp"
#include "pmld/jumps.hpp"
#include "pmld/stats.hpp"

using namespace pmld;

namespace {

SkeletonProblem additive_problem(std::size_t K, double T) {
    SkeletonProblem p;
    p.op = make_operator_laplacian(K);
    p.psi = make_psi_linear(1.0);
    p.marks = make_mark_space({0.0, 1.0}, {0.6, 0.4});
    SpectralField eta = zero_field(K);
    eta[0] = 1.0;
    if (K > 1) eta[1] = -0.5;
    p.fc = make_jump_coefficient(p.op, {1.0, 0.5}, BetaProfile{}, 0.0, eta);
    p.x0 = zero_field(K);
    p.T = T;
    return p;
}

}  // namespace

TEST_CASE("plain stream sampling: rate zero, mean counts, interarrival law") {
    const MarkSpace marks = make_mark_space({0.0, 1.0}, {1.5, 0.5});
    Rng rng(RngSpec{101, 0});
    CHECK(sample_prm(marks, 1.0, 0.0, rng).events.empty());

    // eps = 0.1, nu(Z) = 2, T = 1: mean event count 20.
    const std::size_t reps = 10000;
    double total = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        Rng path_rng(RngSpec{102, r});
        total += static_cast<double>(sample_prm(marks, 1.0, 10.0, path_rng).events.size());
    }
    const double mean = total / static_cast<double>(reps);
    const double sd = std::sqrt(20.0 / static_cast<double>(reps));
    CHECK(std::abs(mean - 20.0) <= 3.0 * sd);

    // Single mark: the first arrival is exponential. Only the first gap per
    // stream enters, since later gaps are biased by the horizon truncation.
    const MarkSpace one = make_mark_space({0.0}, {0.7});
    std::vector<double> gaps;
    gaps.reserve(10000);
    for (std::size_t r = 0; r < 10000; ++r) {
        Rng path_rng(RngSpec{103, r});
        const JumpStream s = sample_prm(one, 5.0, 8.0, path_rng);
        if (!s.events.empty()) gaps.push_back(s.events.front().t);
    }
    REQUIRE(gaps.size() == 10000);  // missing first arrivals have mass ~ 7e-13
    CHECK(stats::ks_exponential_pvalue(gaps, 8.0 * 0.7) > 0.01);
}

TEST_CASE("stream events are ordered and marks are valid") {
    const MarkSpace marks = make_mark_space({0.0, 1.0, 2.0}, {1.0, 2.0, 0.5});
    Rng rng(RngSpec{104, 0});
    const JumpStream s = sample_prm(marks, 2.0, 5.0, rng);
    for (std::size_t i = 0; i + 1 < s.events.size(); ++i) {
        CHECK(s.events[i].t <= s.events[i + 1].t);
    }
    for (const auto& ev : s.events) {
        CHECK(ev.t > 0.0);
        CHECK(ev.t <= 2.0);
        CHECK(ev.mark < 3);
    }
}

TEST_CASE("controlled sampling by thinning") {
    const MarkSpace marks = make_mark_space({0.0, 1.0}, {1.0, 1.0});
    const double T = 1.0, eps = 0.1;

    // phi = 1 reproduces the plain intensity in the mean.
    {
        const ControlGrid unit = constant_control(10, 2, T, 1.0);
        double total = 0.0;
        const std::size_t reps = 4000;
        for (std::size_t r = 0; r < reps; ++r) {
            Rng rng(RngSpec{105, r});
            total += static_cast<double>(
                sample_controlled_prm(marks, T, eps, unit, 1.0, rng).events.size());
        }
        const double mean = total / static_cast<double>(reps);
        const double sd = std::sqrt(20.0 / static_cast<double>(reps));
        CHECK(std::abs(mean - 20.0) <= 3.0 * sd);
    }

    // phi = 2 on one mark doubles that mark's mean count.
    {
        ControlGrid phi = constant_control(10, 2, T, 1.0);
        for (std::size_t i = 0; i < 10; ++i) phi.at(i, 0) = 2.0;
        double count0 = 0.0, count1 = 0.0;
        const std::size_t reps = 4000;
        for (std::size_t r = 0; r < reps; ++r) {
            Rng rng(RngSpec{106, r});
            const JumpStream s = sample_controlled_prm(marks, T, eps, phi, 2.0, rng);
            for (const auto& ev : s.events) (ev.mark == 0 ? count0 : count1) += 1.0;
        }
        const double mean0 = count0 / static_cast<double>(reps);
        const double mean1 = count1 / static_cast<double>(reps);
        CHECK(std::abs(mean0 - 20.0) <= 3.0 * std::sqrt(20.0 / static_cast<double>(reps)));
        CHECK(std::abs(mean1 - 10.0) <= 3.0 * std::sqrt(10.0 / static_cast<double>(reps)));
    }

    // Acceptance rate 1/n_bound scales counts down.
    {
        const ControlGrid low = constant_control(10, 2, T, 0.25);
        double total = 0.0;
        const std::size_t reps = 4000;
        for (std::size_t r = 0; r < reps; ++r) {
            Rng rng(RngSpec{107, r});
            total += static_cast<double>(
                sample_controlled_prm(marks, T, eps, low, 4.0, rng).events.size());
        }
        const double mean = total / static_cast<double>(reps);
        CHECK(std::abs(mean - 5.0) <= 3.0 * std::sqrt(5.0 / static_cast<double>(reps)));
    }

    // The admissible class is enforced.
    Rng rng(RngSpec{108, 0});
    const ControlGrid big = constant_control(10, 2, T, 3.0);
    CHECK_THROWS_AS(sample_controlled_prm(marks, T, eps, big, 2.0, rng), InvalidArgumentError);
    ControlGrid off_compact = constant_control(10, 2, T, 1.0);
    off_compact.at(0, 1) = 2.0;
    CHECK_THROWS_AS(sample_controlled_prm(marks, T, eps, off_compact, 2.0, rng, 1),
                    InvalidArgumentError);
}

TEST_CASE("controlled counts keep the Poisson law (chi-square)") {
    const MarkSpace one = make_mark_space({0.0}, {1.0});
    const ControlGrid phi = constant_control(8, 1, 1.0, 1.5);
    std::vector<std::size_t> counts;
    counts.reserve(10000);
    for (std::size_t r = 0; r < 10000; ++r) {
        Rng rng(RngSpec{109, r});
        counts.push_back(sample_controlled_prm(one, 1.0, 0.2, phi, 2.0, rng).events.size());
    }
    // mean = (1/eps) * kappa * nu * T = 7.5
    CHECK(stats::poisson_gof_pvalue(counts, 7.5) > 0.01);
}

TEST_CASE("noiseless degeneracy: empty stream reproduces the skeleton bit-exactly") {
    SkeletonProblem p = additive_problem(3, 0.5);
    p.fc = make_jump_coefficient(p.op, {0.0, 0.0}, BetaProfile{}, 0.0, zero_field(3));
    p.x0 = SpectralField{{1.0, 0.4, 0.2}};
    SolverConfig cfg;
    cfg.n_t = 200;
    JumpStream empty;
    empty.eps = 0.1;
    const SpdeResult spde = solve_spde_with_stream(p, 0.1, empty, cfg);
    const Trajectory skel = solve_skeleton(p, constant_control(cfg.n_t, 2, p.T, 1.0), cfg);
    REQUIRE(spde.traj.states.size() == skel.states.size());
    for (std::size_t i = 0; i < skel.states.size(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(spde.traj.states[i][k] == skel.states[i][k]);
        }
    }
}

TEST_CASE("jump replay identity: applied increments sum exactly") {
    SkeletonProblem p = additive_problem(2, 1.0);
    SolverConfig cfg;
    cfg.n_t = 50;
    SpdeOptions opt;
    opt.record_jumps = true;
    Rng rng(RngSpec{110, 0});
    const SpdeResult r = solve_spde(p, 0.2, std::nullopt, cfg, rng, 1.0, opt);
    REQUIRE(!r.jumps.empty());
    SpectralField total = zero_field(2);
    for (const auto& rec : r.jumps) {
        const SpectralField expect =
            scale(0.2, eval_f(p.fc, p.marks, rec.t, rec.left_state, rec.mark));
        for (std::size_t k = 0; k < 2; ++k) CHECK(expect[k] == rec.increment[k]);
        axpy(1.0, rec.increment, total);
    }
    for (std::size_t k = 0; k < 2; ++k) CHECK(total[k] == r.jump_increment_sum[k]);
}

TEST_CASE("seed determinism of SPDE paths") {
    const SkeletonProblem p = additive_problem(2, 0.5);
    SolverConfig cfg;
    cfg.n_t = 100;
    Rng a(RngSpec{111, 7}), b(RngSpec{111, 7});
    const SpdeResult ra = solve_spde(p, 0.1, std::nullopt, cfg, a);
    const SpdeResult rb = solve_spde(p, 0.1, std::nullopt, cfg, b);
    for (std::size_t i = 0; i < ra.traj.states.size(); ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(ra.traj.states[i][k] == rb.traj.states[i][k]);
        }
    }
}

TEST_CASE("compensation: MC mean matches the unit-control skeleton") {
    const SkeletonProblem p = additive_problem(2, 0.5);
    SolverConfig cfg;
    cfg.n_t = 100;
    const MeanPathReport mc = mc_mean_path(p, 0.1, 4000, cfg, 112);
    const Trajectory skel = solve_skeleton(p, constant_control(cfg.n_t, 2, p.T, 1.0), cfg);
    // Ten checkpoints spread over the horizon, every mode within 3 SE.
    for (std::size_t c = 1; c <= 10; ++c) {
        const std::size_t i = c * cfg.n_t / 10;
        for (std::size_t k = 0; k < 2; ++k) {
            const double se = mc.stderr_[i][k];
            CHECK(std::abs(mc.mean[i][k] - skel.states[i][k]) <= 3.0 * se);
        }
    }
}

TEST_CASE("variance of the terminal mode scales linearly in eps") {
    const SkeletonProblem p = additive_problem(1, 0.5);
    SolverConfig cfg;
    cfg.n_t = 50;
    std::vector<double> log_eps, log_var;
    for (double eps : {0.2, 0.1, 0.05}) {
        const std::size_t trials = 3000;
        std::vector<double> terminal(trials);
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng(RngSpec{113, t});
            terminal[t] = solve_spde(p, eps, std::nullopt, cfg, rng).traj.states.back()[0];
        }
        const auto [mean, se] = stats::mean_stderr(terminal);
        (void)se;
        double var = 0.0;
        for (double v : terminal) var += (v - mean) * (v - mean);
        var /= static_cast<double>(trials - 1);
        log_eps.push_back(std::log(eps));
        log_var.push_back(std::log(var));
    }
    const double slope = stats::linear_fit(log_eps, log_var).slope;
    CHECK(slope == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("condition (b): pathwise gap to the skeleton is O(eps)") {
    const SkeletonProblem p = additive_problem(2, 0.5);
    SolverConfig cfg;
    cfg.n_t = 100;
    ControlGrid phi = constant_control(20, 2, p.T, 1.0);
    for (std::size_t i = 0; i < phi.n_t; ++i) phi.at(i, 0) = (i % 2 == 0) ? 0.5 : 1.5;
    const ConditionBReport rep =
        condition_b_experiment(p, phi, 2.0, {0.2, 0.1, 0.05}, 300, cfg, 114);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) {
        CHECK(row.estimate > 0.0);
        CHECK(row.stderr_ < row.estimate);
    }
    CHECK(rep.loglog_slope == doctest::Approx(1.0).epsilon(0.3));
    // Deterministic: rerun gives identical estimates.
    const ConditionBReport rep2 =
        condition_b_experiment(p, phi, 2.0, {0.2, 0.1, 0.05}, 300, cfg, 114);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].estimate == rep2.rows[i].estimate);
    }

    // Vanishing noise coefficient: jump paths coincide with the flow.
    SkeletonProblem silent = p;
    silent.fc = make_jump_coefficient(p.op, {0.0, 0.0}, BetaProfile{}, 0.0, zero_field(2));
    const ConditionBReport zero =
        condition_b_experiment(silent, phi, 2.0, {0.2, 0.1}, 50, cfg, 115);
    for (const auto& row : zero.rows) CHECK(row.estimate == 0.0);
}

TEST_CASE("eps outside (0,1] is rejected") {
    const SkeletonProblem p = additive_problem(1, 0.5);
    SolverConfig cfg;
    JumpStream empty;
    empty.eps = 1.0;
    CHECK_THROWS_AS(solve_spde_with_stream(p, 0.0, empty, cfg), InvalidArgumentError);
    CHECK_THROWS_AS(solve_spde_with_stream(p, 1.5, empty, cfg), InvalidArgumentError);
}
