#include "pmld/config.hpp"

#include <fstream>

#include <json.hpp>

#include "pmld/errors.hpp"

namespace pmld {

namespace {

using nlohmann::json;

OperatorSpec parse_operator(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "laplacian") return make_operator_laplacian(j.at("K").get<std::size_t>());
    if (kind == "fractional") {
        return make_operator_fractional(j.at("alpha").get<double>(), j.at("K").get<std::size_t>());
    }
    if (kind == "explicit") {
        return make_operator_explicit(j.at("eigenvalues").get<std::vector<double>>());
    }
    throw InvalidArgumentError("unknown operator kind: " + kind);
}

PsiSpec parse_psi(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "linear") return make_psi_linear(j.at("k0").get<double>());
    if (kind == "stefan") {
        return make_psi_stefan(j.at("a").get<double>(), j.at("b").get<double>(),
                               j.at("rho").get<double>());
    }
    if (kind == "tanh") return make_psi_tanh(j.at("k0").get<double>(), j.at("s").get<double>());
    throw InvalidArgumentError("unknown psi kind: " + kind);
}

JumpCoefficient parse_jump_coefficient(const json& j, const OperatorSpec& op) {
    BetaProfile beta;
    if (j.contains("beta")) {
        const std::string b = j.at("beta").get<std::string>();
        if (b == "one") {
            beta.kind = BetaProfile::Kind::constant_one;
        } else if (b == "cosine") {
            beta.kind = BetaProfile::Kind::cosine;
            beta.omega = j.value("beta_omega", 1.0);
        } else {
            throw InvalidArgumentError("unknown beta profile: " + b);
        }
    }
    SpectralField eta{j.value("eta", std::vector<double>(op.modes(), 0.0))};
    return make_jump_coefficient(op, j.at("sigma").get<std::vector<double>>(), beta,
                                 j.value("c", 0.0), std::move(eta));
}

EventSpec parse_event(const json& j) {
    EventSpec event;
    const std::string obs = j.at("observable").get<std::string>();
    if (obs == "terminal_dual_norm") {
        event.observable = Observable::terminal_dual_norm;
    } else if (obs == "terminal_mode") {
        event.observable = Observable::terminal_mode;
        event.mode = j.value("mode", std::size_t{1});
    } else if (obs == "path_sup_dual") {
        event.observable = Observable::path_sup_dual;
    } else {
        throw InvalidArgumentError("unknown observable: " + obs);
    }
    event.threshold = j.at("threshold").get<double>();
    const std::string dir = j.value("direction", std::string("ge"));
    if (dir == "ge") {
        event.direction = EventDirection::ge;
    } else if (dir == "le") {
        event.direction = EventDirection::le;
    } else {
        throw InvalidArgumentError("unknown event direction: " + dir);
    }
    return event;
}

ControlGrid parse_control(const json& j, std::size_t n_t, std::size_t m, double T) {
    if (!j.is_object()) return constant_control(n_t, m, T, 1.0);
    const std::string kind = j.value("kind", std::string("constant"));
    const std::size_t cells = j.value("n_t", n_t);
    if (kind == "constant") {
        return constant_control(cells, m, T, j.value("value", 1.0));
    }
    if (kind == "file") {
        return read_control_csv(j.at("path").get<std::string>(), T);
    }
    if (kind == "oscillating") {
        // Alternates low/high with the given number of full periods.
        const double low = j.value("low", 0.0);
        const double high = j.value("high", 2.0);
        const std::size_t frequency = j.value("frequency", std::size_t{4});
        ControlGrid g = constant_control(cells, m, T, low);
        for (std::size_t i = 0; i < cells; ++i) {
            const std::size_t phase = (2 * frequency * i) / cells;
            const double v = (phase % 2 == 0) ? low : high;
            for (std::size_t jj = 0; jj < m; ++jj) g.at(i, jj) = v;
        }
        return g;
    }
    throw InvalidArgumentError("unknown control kind: " + kind);
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgumentError("cannot open config: " + path);
    json j;
    in >> j;

    RunConfig cfg;
    cfg.problem.T = j.value("T", 1.0);
    cfg.problem.op = parse_operator(j.at("operator"));
    cfg.problem.psi = parse_psi(j.at("psi"));

    const json& marks = j.at("marks");
    cfg.problem.marks = make_mark_space(marks.at("marks").get<std::vector<double>>(),
                                        marks.at("weights").get<std::vector<double>>());
    cfg.problem.fc = parse_jump_coefficient(marks, cfg.problem.op);
    if (cfg.problem.fc.sigma.size() != cfg.problem.marks.size()) {
        throw DimensionMismatchError("sigma length must equal the number of marks");
    }

    cfg.problem.x0 =
        SpectralField{j.value("x0", std::vector<double>(cfg.problem.op.modes(), 0.0))};

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        cfg.solver.n_t = s.value("n_t", cfg.solver.n_t);
        cfg.solver.M = s.value("M", cfg.solver.M);
        cfg.solver.fp_tol = s.value("fp_tol", cfg.solver.fp_tol);
        cfg.solver.fp_max = s.value("fp_max", cfg.solver.fp_max);
        cfg.solver.relax = s.value("relax", cfg.solver.relax);
        cfg.solver.adapt = s.value("adapt", cfg.solver.adapt);
    }

    cfg.control = parse_control(j.value("control", json()), cfg.solver.n_t,
                                cfg.problem.marks.size(), cfg.problem.T);
    if (j.contains("budget")) {
        cfg.budget = j.at("budget").get<double>();
        cfg.control = project_to_budget(cfg.control, cfg.problem.marks, *cfg.budget);
    }

    cfg.eps = j.value("eps", cfg.eps);
    if (j.contains("event")) cfg.event = parse_event(j.at("event"));
    if (j.contains("opt")) {
        const json& o = j.at("opt");
        cfg.rate_options.control_cells = o.value("control_cells", cfg.rate_options.control_cells);
        cfg.rate_options.n_starts = o.value("n_starts", cfg.rate_options.n_starts);
        cfg.rate_options.max_iters = o.value("max_iters", cfg.rate_options.max_iters);
        cfg.rate_options.fd_step = o.value("fd_step", cfg.rate_options.fd_step);
        cfg.rate_options.feasibility_tol =
            o.value("feasibility_tol", cfg.rate_options.feasibility_tol);
    }
    cfg.trials = j.value("trials", cfg.trials);
    if (j.contains("eps_list")) cfg.eps_list = j.at("eps_list").get<std::vector<double>>();
    cfg.n_bound = j.value("n_bound", cfg.n_bound);
    return cfg;
}

}  // namespace pmld
