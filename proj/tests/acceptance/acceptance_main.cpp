// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via ctest (the CLI path is wired in) or directly:
//   pmld_acceptance --cli path/to/pmld [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pmld/config.hpp"
#include "pmld/jumps.hpp"
#include "pmld/rate.hpp"
#include "pmld/stats.hpp"

using namespace pmld;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
Outcome heat_equation_oracle() {
    SkeletonProblem p;
    p.op = make_operator_laplacian(4);
    p.psi = make_psi_linear(1.0);
    p.marks = make_mark_space({0.0}, {1.0});
    p.fc = make_jump_coefficient(p.op, {1.0}, BetaProfile{}, 0.0, zero_field(4));
    p.x0 = SpectralField{{1.0, 1.0, 1.0, 1.0}};
    p.T = 0.5;
    SolverConfig cfg;
    cfg.n_t = 5000;
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory traj = solve_skeleton(p, constant_control(cfg.n_t, 1, p.T, 1.0), cfg);
    const double elapsed = seconds_since(t0);
    double worst = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double exact = std::exp(-p.op.eigenvalues[k] * p.T);
        worst = std::max(worst, std::abs(traj.states.back()[k] - exact) / exact);
    }
    Outcome out;
    out.pass = worst <= 1e-5 && elapsed < 1.0;
    out.detail = "max rel err " + fmt(worst) + ", " + fmt(elapsed) + " s";
    return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome stefan_flat_fixed_point() {
    SkeletonProblem p;
    p.op = make_operator_laplacian(4);
    p.psi = make_psi_stefan(1.0, 2.0, 10.0);
    p.marks = make_mark_space({0.0}, {1.0});
    p.fc = make_jump_coefficient(p.op, {1.0}, BetaProfile{}, 0.0, SpectralField{{1, 0, 0, 0}});
    p.x0 = SpectralField{{0.5, 0.1, -0.05, 0.02}};  // grid values stay inside (0, rho)
    p.T = 1.0;
    SolverConfig cfg;
    cfg.n_t = 100;
    const Trajectory traj = solve_skeleton(p, constant_control(cfg.n_t, 1, p.T, 1.0), cfg);
    const double dist = norm_dual(sub(traj.states.back(), p.x0), p.op);
    Outcome out;
    out.pass = dist <= 1e-12;
    out.detail = "terminal distance " + fmt(dist);
    return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome strong_monotonicity() {
    Rng rng(RngSpec{7001, 0});
    double worst = 0.0;
    for (const PsiSpec& psi :
         {make_psi_linear(1.0), make_psi_stefan(2.0, 3.0, 1.0), make_psi_tanh(1.5, 0.7)}) {
        for (int i = 0; i < 100000; ++i) {
            const double r = rng.uniform(-10.0, 10.0);
            const double rp = rng.uniform(-10.0, 10.0);
            const double dpsi = psi_eval(psi, r) - psi_eval(psi, rp);
            const double slack = dpsi * (r - rp) - psi.alpha_tilde * dpsi * dpsi;
            worst = std::min(worst, slack);
        }
    }
    Outcome out;
    out.pass = worst >= -1e-12;
    out.detail = "worst slack " + fmt(worst);
    return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome q_cost_oracle() {
    if (entropy_l(1.0) != 0.0 || entropy_l(0.0) != 1.0) {
        return Outcome{false, "entropy endpoint values wrong"};
    }
    Rng rng(RngSpec{7002, 0});
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n_t = 1 + static_cast<std::size_t>(rng.uniform() * 12);
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 4);
        std::vector<double> marks(m), weights(m), values(n_t * m);
        for (std::size_t j = 0; j < m; ++j) {
            marks[j] = static_cast<double>(j);
            weights[j] = rng.uniform(0.1, 2.0);
        }
        for (auto& v : values) v = rng.uniform(0.0, 4.0);
        const MarkSpace space = make_mark_space(marks, weights);
        const ControlGrid g = make_control(n_t, m, rng.uniform(0.5, 3.0), values);
        // Independent cell-by-cell quadrature.
        double oracle = 0.0;
        const double dt = g.dt();
        for (std::size_t i = 0; i < n_t; ++i) {
            double cell = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double r = g.at(i, j);
                cell += (r == 0.0 ? 1.0 : r * std::log(r) - r + 1.0) * weights[j];
            }
            oracle += cell * dt;
        }
        worst = std::max(worst, std::abs(q_cost(g, space) - oracle));
    }
    Outcome out;
    out.pass = worst <= 1e-12;
    out.detail = "max |q - oracle| " + fmt(worst);
    return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome apriori_bound() {
    SkeletonProblem p;
    p.op = make_operator_laplacian(4);
    p.psi = make_psi_stefan(1.0, 2.0, 1.0);
    p.marks = make_mark_space({0.0, 1.0}, {1.0, 0.5});
    p.fc = make_jump_coefficient(p.op, {1.0, 0.5}, BetaProfile{}, 0.3,
                                 SpectralField{{0.5, 0.0, 0.2, 0.0}});
    p.x0 = SpectralField{{1.0, -0.5, 0.3, 0.1}};
    p.T = 1.0;
    SolverConfig cfg;
    cfg.n_t = 100;
    Rng rng(RngSpec{7003, 0});
    int violations = 0, runs = 0;
    for (double budget : {1.0, 2.0, 5.0}) {
        for (int trial = 0; trial < 17; ++trial) {
            std::vector<double> values(cfg.n_t * 2);
            for (auto& v : values) v = rng.uniform(0.0, 5.0);
            const ControlGrid g =
                project_to_budget(make_control(cfg.n_t, 2, p.T, values), p.marks, budget);
            const Trajectory traj = solve_skeleton(p, g, cfg);
            if (!apriori_report(traj, p, g).bound_ok) ++violations;
            ++runs;
        }
    }
    Outcome out;
    out.pass = violations == 0;
    out.detail = std::to_string(violations) + " violations in " + std::to_string(runs) + " runs";
    return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome regularization_ladders() {
    SkeletonProblem p;
    p.op = make_operator_laplacian(4);
    p.psi = make_psi_tanh(1.0, 0.8);
    p.marks = make_mark_space({0.0}, {1.0});
    p.fc = make_jump_coefficient(p.op, {1.0}, BetaProfile{}, 0.0,
                                 SpectralField{{0.4, 0.2, 0.0, 0.0}});
    p.x0 = SpectralField{{1.0, 0.5, 0.25, 0.1}};
    p.T = 0.5;
    SolverConfig cfg;
    cfg.n_t = 2000;
    const ControlGrid g = constant_control(cfg.n_t, 1, p.T, 2.0);

    const Trajectory base = solve_skeleton(p, g, cfg);
    std::vector<double> eps_dist;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
        eps_dist.push_back(sup_dual_distance(solve_regularized(p, g, cfg, eps, 0.0), base, p.op));
    }
    const Trajectory reg_base = solve_regularized(p, g, cfg, 0.1, 0.0);
    std::vector<double> delta_dist;
    for (double delta : {0.2, 0.1, 0.05, 0.025}) {
        delta_dist.push_back(
            sup_dual_distance(solve_regularized(p, g, cfg, 0.1, delta), reg_base, p.op));
    }
    bool ok = true;
    std::string ratios = "eps ratios";
    for (std::size_t i = 0; i + 1 < eps_dist.size(); ++i) {
        const double r = eps_dist[i] / eps_dist[i + 1];
        ok = ok && r >= 1.5 && r <= 2.5;
        ratios += " " + fmt(r);
    }
    ratios += ", delta ratios";
    for (std::size_t i = 0; i + 1 < delta_dist.size(); ++i) {
        const double r = delta_dist[i] / delta_dist[i + 1];
        ok = ok && r >= 1.3 && r <= 2.7;
        ratios += " " + fmt(r);
    }
    return Outcome{ok, ratios};
}

// ---------------------------------------------------------------- criterion 7
Outcome prm_statistics() {
    const MarkSpace marks = make_mark_space({0.0, 1.0}, {0.8, 0.4});
    const double T = 1.0;
    const double rate_scale = 10.0;  // eps = 0.1
    const std::size_t reps = 10000;

    std::vector<std::size_t> counts0, counts1;
    counts0.reserve(reps);
    counts1.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(RngSpec{1001, r});
        const JumpStream s = sample_prm(marks, T, rate_scale, rng);
        std::size_t c0 = 0, c1 = 0;
        for (const auto& ev : s.events) (ev.mark == 0 ? c0 : c1) += 1;
        counts0.push_back(c0);
        counts1.push_back(c1);
    }
    const double p0 = stats::poisson_gof_pvalue(counts0, rate_scale * 0.8 * T);
    const double p1 = stats::poisson_gof_pvalue(counts1, rate_scale * 0.4 * T);

    // Thinned controlled stream with phi = kappa scales the means by kappa.
    const double kappa = 1.5;
    const ControlGrid phi = constant_control(10, 2, T, kappa);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(RngSpec{1001, 100000 + r});
        const JumpStream s = sample_controlled_prm(marks, T, 0.1, phi, 2.0, rng);
        for (const auto& ev : s.events) (ev.mark == 0 ? m0 : m1) += 1.0;
    }
    m0 /= static_cast<double>(reps);
    m1 /= static_cast<double>(reps);
    const double mu0 = kappa * rate_scale * 0.8 * T;
    const double mu1 = kappa * rate_scale * 0.4 * T;
    const double sd0 = 3.0 * std::sqrt(mu0 / static_cast<double>(reps));
    const double sd1 = 3.0 * std::sqrt(mu1 / static_cast<double>(reps));
    const bool scale_ok = std::abs(m0 - mu0) <= sd0 && std::abs(m1 - mu1) <= sd1;

    Outcome out;
    out.pass = p0 > 0.01 && p1 > 0.01 && scale_ok;
    out.detail = "chi2 p = " + fmt(p0) + "/" + fmt(p1) + ", thinned means " + fmt(m0) + "/" +
                 fmt(m1) + " vs " + fmt(mu0) + "/" + fmt(mu1);
    return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome compensation_mean() {
    SkeletonProblem p;
    p.op = make_operator_laplacian(2);
    p.psi = make_psi_linear(1.0);
    p.marks = make_mark_space({0.0, 1.0}, {0.6, 0.4});
    p.fc = make_jump_coefficient(p.op, {1.0, 0.5}, BetaProfile{}, 0.0,
                                 SpectralField{{1.0, -0.5}});
    p.x0 = zero_field(2);
    p.T = 0.5;
    SolverConfig cfg;
    cfg.n_t = 100;
    const MeanPathReport mc = mc_mean_path(p, 0.1, 10000, cfg, 7006);
    const Trajectory skel = solve_skeleton(p, constant_control(cfg.n_t, 2, p.T, 1.0), cfg);
    int misses = 0;
    double worst_z = 0.0;
    for (std::size_t c = 1; c <= 10; ++c) {
        const std::size_t i = c * cfg.n_t / 10;
        for (std::size_t k = 0; k < 2; ++k) {
            const double z = std::abs(mc.mean[i][k] - skel.states[i][k]) / mc.stderr_[i][k];
            worst_z = std::max(worst_z, z);
            if (z > 3.0) ++misses;
        }
    }
    Outcome out;
    out.pass = misses == 0;
    out.detail = "worst |z| " + fmt(worst_z) + " over 10 checkpoints x 2 modes";
    return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome condition_b_rate() {
    SkeletonProblem p;
    p.op = make_operator_laplacian(2);
    p.psi = make_psi_linear(1.0);
    p.marks = make_mark_space({0.0, 1.0}, {0.6, 0.4});
    p.fc = make_jump_coefficient(p.op, {1.0, 0.5}, BetaProfile{}, 0.0,
                                 SpectralField{{1.0, -0.5}});
    p.x0 = zero_field(2);
    p.T = 0.5;
    SolverConfig cfg;
    cfg.n_t = 100;
    ControlGrid phi = constant_control(20, 2, p.T, 1.0);
    for (std::size_t i = 0; i < phi.n_t; ++i) phi.at(i, 0) = (i % 2 == 0) ? 0.5 : 1.5;

    const auto t0 = std::chrono::steady_clock::now();
    const ConditionBReport rep =
        condition_b_experiment(p, phi, 2.0, {0.2, 0.1, 0.05, 0.025}, 1000, cfg, 7007);
    const double elapsed = seconds_since(t0);
    Outcome out;
    out.pass = std::abs(rep.loglog_slope - 1.0) <= 0.3 && elapsed < 300.0;
    out.detail = "log-log slope " + fmt(rep.loglog_slope) + ", " + fmt(elapsed) + " s";
    return out;
}

// --------------------------------------------------------------- criterion 10
Outcome condition_a_continuity() {
    SkeletonProblem p;
    p.op = make_operator_laplacian(3);
    p.psi = make_psi_linear(1.0);
    p.marks = make_mark_space({0.0}, {1.0});
    p.fc = make_jump_coefficient(p.op, {1.0}, BetaProfile{}, 0.0, SpectralField{{1.0, 0.5, 0.2}});
    p.x0 = SpectralField{{0.5, 0.2, 0.1}};
    p.T = 1.0;
    SolverConfig cfg;
    cfg.n_t = 640;
    const ControlGrid limit = constant_control(cfg.n_t, 1, p.T, 1.0);
    std::vector<ControlGrid> seq;
    for (std::size_t freq : {4, 8, 16, 32}) {
        ControlGrid g = limit;
        for (std::size_t i = 0; i < g.n_t; ++i) {
            const std::size_t phase = (2 * freq * i) / g.n_t;
            g.at(i, 0) = (phase % 2 == 0) ? 0.0 : 2.0;
        }
        seq.push_back(g);
    }
    const ContinuityReport rep = continuity_experiment(p, seq, limit, cfg);
    bool decreasing = true;
    std::string detail = "distances";
    for (std::size_t i = 0; i < rep.distances.size(); ++i) {
        if (i + 1 < rep.distances.size() && rep.distances[i + 1] >= rep.distances[i]) {
            decreasing = false;
        }
        detail += " " + fmt(rep.distances[i]);
    }
    return Outcome{decreasing, detail};
}

// --------------------------------------------------------------- criterion 11
Outcome ldp_slope_consistency() {
    SkeletonProblem p;
    p.op = make_operator_laplacian(1);
    p.psi = make_psi_linear(1.0);
    p.marks = make_mark_space({0.0}, {1.0});
    p.fc = make_jump_coefficient(p.op, {1.0}, BetaProfile{}, 0.0, SpectralField{{1.0}});
    p.x0 = zero_field(1);
    p.T = 0.3;
    SolverConfig cfg;
    cfg.n_t = 150;

    EventSpec ev;
    ev.observable = Observable::terminal_mode;
    ev.mode = 1;
    ev.threshold = 0.47;
    ev.direction = EventDirection::ge;

    const auto t0 = std::chrono::steady_clock::now();

    RateOptions opt;
    opt.control_cells = 15;
    opt.n_starts = 3;
    opt.max_iters = 50;
    const RateResult rate = minimize_rate(ev, p, cfg, opt);
    if (!rate.feasible) return Outcome{false, "rate optimization infeasible"};

    // Scalar grid search over constant one-mark controls, closed-form
    // terminal map x(T) = (g-1)(1 - e^{-T}).
    const double gain = 1.0 - std::exp(-p.T);
    double oracle = std::numeric_limits<double>::infinity();
    for (double g = 0.0; g <= 10.0; g += 1e-3) {
        if ((g - 1.0) * gain >= ev.threshold) oracle = std::min(oracle, entropy_l(g) * p.T);
    }
    const double oracle_gap = std::abs(rate.q_star - oracle) / oracle;

    const McRareTable mc = mc_rare_event(ev, p, {0.2, 0.1, 0.05}, 100000, cfg, 7008);
    const double elapsed = seconds_since(t0);

    const bool window_ok =
        mc.rows[0].p_hat >= 1e-3 && mc.rows[0].p_hat <= 1e-1;  // calibration clause
    bool all_valid = true;
    for (const auto& row : mc.rows) all_valid = all_valid && row.valid;
    if (!all_valid) return Outcome{false, "a Monte Carlo row had zero hits"};

    const SlopeCompareReport cmp = ldp_slope_compare(rate, mc);
    Outcome out;
    out.pass = window_ok && oracle_gap <= 0.05 && cmp.relative_gap <= 0.25 && elapsed < 600.0;
    out.detail = "p(0.2) = " + fmt(mc.rows[0].p_hat) + ", oracle gap " + fmt(oracle_gap) +
                 ", slope gap " + fmt(cmp.relative_gap) + ", " + fmt(elapsed) + " s";
    return out;
}

// --------------------------------------------------------------- criterion 12
std::string cli_path;  // set from --cli

Outcome cli_determinism() {
    if (cli_path.empty()) return Outcome{false, "no --cli path given"};
    const fs::path work = fs::current_path() / "acceptance_tmp";
    fs::remove_all(work);
    fs::create_directories(work);

    const std::string config = R"({
  "T": 0.5,
  "operator": {"kind": "laplacian", "K": 3},
  "psi": {"kind": "stefan", "a": 1.0, "b": 2.0, "rho": 0.5},
  "marks": {"marks": [0.0, 1.0], "weights": [0.7, 0.3],
            "sigma": [1.0, 0.5], "beta": "one", "c": 0.2, "eta": [0.6, 0.0, 0.2]},
  "x0": [0.8, 0.3, 0.1],
  "solver": {"n_t": 60},
  "control": {"kind": "constant", "value": 1.3, "n_t": 60},
  "eps": 0.2,
  "n_bound": 2.0,
  "event": {"observable": "terminal_mode", "mode": 1, "threshold": 0.3, "direction": "ge"},
  "opt": {"control_cells": 6, "n_starts": 2, "max_iters": 10},
  "trials": 200,
  "eps_list": [0.2, 0.1]
})";
    const fs::path config_path = work / "config.json";
    std::ofstream(config_path) << config;

    const std::vector<std::string> commands = {"skeleton", "sample", "rate", "ldp", "verify"};
    for (const std::string& cmd : commands) {
        for (const char* run : {"a", "b"}) {
            const fs::path out_dir = work / (cmd + "_" + run);
            std::ostringstream call;
            call << '"' << cli_path << "\" " << cmd << " --config \"" << config_path.string()
                 << "\" --out \"" << out_dir.string() << '"';
            if (cmd == "sample" || cmd == "ldp") call << " --seed 9";
            call << " > /dev/null 2>&1";
            const int rc = std::system(call.str().c_str());
            if (rc != 0) {
                return Outcome{false, cmd + " exited with " + std::to_string(rc)};
            }
        }
        // Compare every CSV byte for byte.
        const fs::path a = work / (cmd + "_a");
        std::size_t compared = 0;
        for (const auto& entry : fs::directory_iterator(a)) {
            if (entry.path().extension() != ".csv") continue;
            const fs::path b = work / (cmd + "_b") / entry.path().filename();
            std::ifstream fa(entry.path(), std::ios::binary), fb(b, std::ios::binary);
            if (!fa || !fb) return Outcome{false, cmd + ": missing " + b.string()};
            std::stringstream sa, sb;
            sa << fa.rdbuf();
            sb << fb.rdbuf();
            if (sa.str() != sb.str()) {
                return Outcome{false, cmd + ": " + entry.path().filename().string() + " differs"};
            }
            ++compared;
        }
        if (compared == 0) return Outcome{false, cmd + " produced no CSV output"};
    }
    fs::remove_all(work);
    return Outcome{true, "5 subcommands, two runs each, all CSVs byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) cli_path = argv[++i];
        if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "heat-equation oracle", heat_equation_oracle},
        {2, "stefan flat-region fixed point", stefan_flat_fixed_point},
        {3, "strong-monotonicity property", strong_monotonicity},
        {4, "q-cost oracle", q_cost_oracle},
        {5, "a-priori bound", apriori_bound},
        {6, "regularization convergence ladders", regularization_ladders},
        {7, "prm statistics", prm_statistics},
        {8, "compensation mean check", compensation_mean},
        {9, "condition (b) rate", condition_b_rate},
        {10, "condition (a) continuity", condition_a_continuity},
        {11, "ldp slope consistency", ldp_slope_consistency},
        {12, "cli determinism", cli_determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = Outcome{false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %02d %s (%s)\n", outcome.pass ? "PASS" : "FAIL", criterion.id,
                    criterion.name, outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    return failures;
}
