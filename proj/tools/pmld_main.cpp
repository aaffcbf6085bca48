// Command-line front end: deterministic flows, jump sampling, rate-function
// optimization, rare-event tables, and hypothesis verification.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pmld/config.hpp"
#include "pmld/csv.hpp"
#include "pmld/errors.hpp"
#include "pmld/jumps.hpp"
#include "pmld/rate.hpp"
#include "pmld/svg.hpp"

namespace {

using namespace pmld;

std::vector<double> parse_eps_list(const std::string& csv_list) {
    std::vector<double> out;
    std::stringstream ss(csv_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

void write_trajectory(const std::string& path, const Trajectory& traj) {
    csv::Table table;
    table.header.push_back("t");
    for (std::size_t k = 1; k <= traj.states.front().size(); ++k) {
        table.header.push_back("c_" + std::to_string(k));
    }
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::vector<double> row;
        row.push_back(traj.times[i]);
        for (double c : traj.states[i].coeffs) row.push_back(c);
        table.rows.push_back(std::move(row));
    }
    csv::write_table(path, table);
}

void plot_trajectory_norms(const std::string& path, const Trajectory& traj,
                           const OperatorSpec& op) {
    svg::Series dual{"dual norm", traj.times, {}};
    svg::Series l2{"L2 norm", traj.times, {}};
    for (const auto& s : traj.states) {
        dual.y.push_back(norm_dual(s, op));
        l2.y.push_back(norm_l2(s));
    }
    svg::write_plot(path, "trajectory norms", {dual, l2});
}

int cmd_skeleton(const RunConfig& cfg, const std::string& out_dir) {
    const Trajectory traj = solve_skeleton(cfg.problem, cfg.control, cfg.solver);
    write_trajectory(out_dir + "/trajectory.csv", traj);
    const AprioriReport report = apriori_report(traj, cfg.problem, cfg.control);
    csv::Table table;
    table.header = {"sup_l2_sq", "c_l3", "bound_value", "bound_ok"};
    table.rows.push_back(
        {report.sup_l2_sq, report.c_l3, report.bound_value, report.bound_ok ? 1.0 : 0.0});
    csv::write_table(out_dir + "/results.csv", table);
    plot_trajectory_norms(out_dir + "/plot.svg", traj, cfg.problem.op);
    std::cout << "skeleton: sup |X|_2^2 = " << report.sup_l2_sq
              << (report.bound_ok ? " (a-priori bound holds)\n" : " (a-priori bound VIOLATED)\n");
    return report.bound_ok ? 0 : 1;
}

int cmd_sample(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed) {
    Rng rng(RngSpec{seed, 0});
    const JumpStream stream = sample_controlled_prm(cfg.problem.marks, cfg.problem.T, cfg.eps,
                                                    cfg.control, cfg.n_bound, rng);
    const SpdeResult result = solve_spde_with_stream(cfg.problem, cfg.eps, stream, cfg.solver);
    csv::Table jumps;
    jumps.header = {"t", "mark"};
    for (const auto& ev : stream.events) {
        jumps.rows.push_back({ev.t, static_cast<double>(ev.mark)});
    }
    csv::write_table(out_dir + "/jumps.csv", jumps);
    write_trajectory(out_dir + "/trajectory.csv", result.traj);
    plot_trajectory_norms(out_dir + "/plot.svg", result.traj, cfg.problem.op);
    std::cout << "sample: " << stream.events.size() << " jumps, eps = " << cfg.eps << "\n";
    return 0;
}

int cmd_rate(const RunConfig& cfg, const std::string& out_dir) {
    if (!cfg.event.has_value()) throw InvalidArgumentError("rate needs an event in the config");
    const RateResult result = minimize_rate(*cfg.event, cfg.problem, cfg.solver, cfg.rate_options);
    write_control_csv(out_dir + "/g_star.csv", result.g_star);
    csv::Table table;
    table.header = {"q_star", "gap", "feasible", "evaluations"};
    table.rows.push_back({result.q_star, result.gap, result.feasible ? 1.0 : 0.0,
                          static_cast<double>(result.evaluations)});
    csv::write_table(out_dir + "/results.csv", table);
    std::cout << "rate: upper bound on I = " << result.q_star << " (gap " << result.gap << ")\n"
              << result.trace;
    return result.feasible ? 0 : 1;
}

int cmd_ldp(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed,
            std::size_t trials, const std::vector<double>& eps_list) {
    if (!cfg.event.has_value()) throw InvalidArgumentError("ldp needs an event in the config");
    const RateResult rate = minimize_rate(*cfg.event, cfg.problem, cfg.solver, cfg.rate_options);
    const McRareTable mc =
        mc_rare_event(*cfg.event, cfg.problem, eps_list, trials, cfg.solver, seed);
    csv::Table table;
    table.header = {"eps", "p_hat", "eps_log_p", "stderr", "trials", "valid"};
    svg::Series points{"eps log p", {}, {}};
    for (const auto& row : mc.rows) {
        table.rows.push_back({row.eps, row.p_hat, row.eps_log_p, row.stderr_,
                              static_cast<double>(row.trials), row.valid ? 1.0 : 0.0});
        if (row.valid) {
            points.x.push_back(row.eps);
            points.y.push_back(row.eps_log_p);
        }
    }
    csv::write_table(out_dir + "/results.csv", table);
    write_control_csv(out_dir + "/g_star.csv", rate.g_star);
    if (points.x.size() >= 2) svg::write_plot(out_dir + "/plot.svg", "ldp slope", {points});

    std::cout << "ldp: -q_star = " << -rate.q_star << "\n";
    try {
        const SlopeCompareReport cmp = ldp_slope_compare(rate, mc);
        csv::Table summary;
        summary.header = {"minus_rate", "extrapolated", "relative_gap", "comparable"};
        summary.rows.push_back({cmp.minus_rate, cmp.extrapolated, cmp.relative_gap,
                                cmp.comparable ? 1.0 : 0.0});
        csv::write_table(out_dir + "/slope.csv", summary);
        std::cout << "ldp: extrapolated eps log p = " << cmp.extrapolated << ", relative gap = "
                  << cmp.relative_gap << " (upper bound on I; consistency check only)\n";
    } catch (const InsufficientDataError& e) {
        std::cout << "ldp: " << e.what() << "\n";
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed) {
    int failures = 0;
    csv::Table table;
    table.header = {"check_index", "ok", "detail"};
    const auto record = [&](const std::string& name, bool ok, double detail) {
        table.rows.push_back({static_cast<double>(table.rows.size()), ok ? 1.0 : 0.0, detail});
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << " (" << detail << ")\n";
        if (!ok) ++failures;
    };

    const H1Report h1 = check_H1(cfg.problem.psi, 20000, -10.0, 10.0);
    record("psi monotone", h1.monotone, h1.worst_monotone_violation);
    record("psi lipschitz", h1.lip_observed <= cfg.problem.psi.lip + 1e-9, h1.lip_observed);
    record("psi zero at zero", h1.psi0 == 0.0, h1.psi0);

    const H2Report h2 = check_H2(cfg.problem.fc, cfg.problem.marks, cfg.problem.op, 2000);
    record("noise lipschitz bound", h2.min_slack_lipschitz >= -1e-9, h2.min_slack_lipschitz);
    record("noise growth bound (dual)", h2.min_slack_growth_dual >= -1e-9,
           h2.min_slack_growth_dual);
    record("noise growth bound (l2)", h2.min_slack_growth_l2 >= -1e-9, h2.min_slack_growth_l2);
    record("noise eps-norm bound", h2.min_slack_eps_variant >= -1e-9, h2.min_slack_eps_variant);

    record("entropy l(1) = 0", entropy_l(1.0) == 0.0, entropy_l(1.0));
    record("entropy l(0) = 1", entropy_l(0.0) == 1.0, entropy_l(0.0));
    const double q = q_cost(cfg.control, cfg.problem.marks);
    record("control cost finite", std::isfinite(q), q);

    // Dual pairing of (1-L)u against v equals the L2 inner product.
    Rng rng(RngSpec{3, 0});
    SpectralField u = zero_field(cfg.problem.op.modes()), v = u;
    for (std::size_t k = 0; k < u.size(); ++k) {
        u[k] = rng.normal();
        v[k] = rng.normal();
    }
    SpectralField one_minus_L_u = u;
    for (std::size_t k = 0; k < u.size(); ++k) {
        one_minus_L_u[k] *= 1.0 + cfg.problem.op.eigenvalues[k];
    }
    const double pairing = inner_dual(one_minus_L_u, v, cfg.problem.op);
    const double direct = inner_l2(u, v);
    record("duality identity", std::abs(pairing - direct) <= 1e-12 * (1.0 + std::abs(direct)),
           pairing - direct);

    // Pathwise convergence of the jump paths to the deterministic flow with
    // the same control, over the configured eps ladder.
    const ConditionBReport gap = condition_b_experiment(
        cfg.problem, cfg.control, cfg.n_bound, cfg.eps_list, cfg.trials, cfg.solver, seed);
    csv::Table experiment;
    experiment.header = {"eps", "estimate", "stderr", "trials"};
    for (const auto& row : gap.rows) {
        experiment.rows.push_back(
            {row.eps, row.estimate, row.stderr_, static_cast<double>(row.trials)});
    }
    csv::write_table(out_dir + "/conditionb.csv", experiment);
    std::cout << "pathwise-gap log-log slope over eps: " << gap.loglog_slope << "\n";

    csv::write_table(out_dir + "/results.csv", table);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic porous-media flows with jump noise: solvers, sampling, "
                 "rate-function optimization, rare-event tables"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::size_t trials = 0;
    std::string eps_csv;

    const auto add_common = [&](CLI::App* sub, bool needs_seed) {
        sub->add_option("--config", config_path, "JSON problem config")->required();
        sub->add_option("--out", out_dir, "output directory");
        if (needs_seed) sub->add_option("--seed", seed, "RNG seed");
    };

    CLI::App* skeleton = app.add_subcommand("skeleton", "solve the deterministic controlled flow");
    add_common(skeleton, false);
    CLI::App* sample = app.add_subcommand("sample", "sample a jump stream and one SPDE path");
    add_common(sample, true);
    CLI::App* rate = app.add_subcommand("rate", "optimize the rate-function upper bound");
    add_common(rate, false);
    CLI::App* ldp = app.add_subcommand("ldp", "rare-event Monte Carlo against the rate bound");
    add_common(ldp, true);
    ldp->add_option("--trials", trials, "Monte Carlo trials per eps");
    ldp->add_option("--eps-list", eps_csv, "comma-separated eps ladder");
    CLI::App* verify = app.add_subcommand("verify", "check the standing hypotheses");
    add_common(verify, true);

    CLI11_PARSE(app, argc, argv);

    try {
        pmld::RunConfig cfg = pmld::load_config(config_path);
        std::filesystem::create_directories(out_dir);
        if (skeleton->parsed()) return cmd_skeleton(cfg, out_dir);
        if (sample->parsed()) return cmd_sample(cfg, out_dir, seed);
        if (rate->parsed()) return cmd_rate(cfg, out_dir);
        if (ldp->parsed()) {
            const std::size_t n = trials ? trials : cfg.trials;
            const std::vector<double> eps_list =
                eps_csv.empty() ? cfg.eps_list : parse_eps_list(eps_csv);
            return cmd_ldp(cfg, out_dir, seed, n, eps_list);
        }
        if (verify->parsed()) return cmd_verify(cfg, out_dir, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
