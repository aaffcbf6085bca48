#include "pmld/control.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pmld/csv.hpp"
#include "pmld/errors.hpp"
#include "pmld/marks.hpp"

namespace pmld {

std::size_t ControlGrid::cell_of(double t) const {
    if (n_t == 0) throw InvalidArgumentError("empty control grid");
    auto cell = static_cast<std::size_t>(std::max(0.0, t / dt()));
    return cell >= n_t ? n_t - 1 : cell;
}

ControlGrid constant_control(std::size_t n_t, std::size_t m, double T, double value) {
    if (n_t < 1 || m < 1 || !(T > 0.0)) throw InvalidArgumentError("control grid shape invalid");
    if (!(value >= 0.0)) throw InvalidArgumentError("control values must be >= 0");
    ControlGrid g;
    g.n_t = n_t;
    g.m = m;
    g.T = T;
    g.values.assign(n_t * m, value);
    return g;
}

ControlGrid make_control(std::size_t n_t, std::size_t m, double T, std::vector<double> values) {
    if (values.size() != n_t * m) throw DimensionMismatchError("control values shape mismatch");
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw InvalidArgumentError("control values must be finite and >= 0");
        }
    }
    ControlGrid g;
    g.n_t = n_t;
    g.m = m;
    g.T = T;
    g.values = std::move(values);
    return g;
}

double entropy_l(double r) {
    if (r < 0.0) throw InvalidArgumentError("entropy integrand requires r >= 0");
    if (r == 0.0) return 1.0;
    return r * std::log(r) - r + 1.0;
}

double q_cost(const ControlGrid& g, const MarkSpace& marks) {
    if (g.m != marks.size()) throw DimensionMismatchError("control grid marks mismatch mark space");
    const double dt = g.dt();
    double total = 0.0;
    for (std::size_t i = 0; i < g.n_t; ++i) {
        for (std::size_t j = 0; j < g.m; ++j) {
            total += entropy_l(g.at(i, j)) * dt * marks.weights[j];
        }
    }
    return total;
}

namespace {

ControlGrid blend_toward_one(const ControlGrid& g, double theta) {
    ControlGrid out = g;
    for (double& v : out.values) v = theta * v + (1.0 - theta);
    return out;
}

}  // namespace

ControlGrid project_to_budget(const ControlGrid& g, const MarkSpace& marks, double budget) {
    if (!(budget > 0.0)) throw InvalidArgumentError("budget must be positive");
    if (q_cost(g, marks) <= budget) {
        ControlGrid out = g;
        out.budget = budget;
        return out;
    }
    // Q(theta*g + (1-theta)*1) is continuous, nondecreasing in theta (convex,
    // zero at theta=0), so bisection lands in [budget-1e-9, budget].
    double lo = 0.0, hi = 1.0;
    ControlGrid candidate = g;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        candidate = blend_toward_one(g, mid);
        const double q = q_cost(candidate, marks);
        if (q > budget) {
            hi = mid;
        } else if (q < budget - 1e-9) {
            lo = mid;
        } else {
            candidate.budget = budget;
            return candidate;
        }
    }
    // Interval exhausted: return the feasible endpoint.
    candidate = blend_toward_one(g, lo);
    candidate.budget = budget;
    return candidate;
}

YoungBound young_bound(double a, double b, double sigma) {
    if (a < 0.0 || b < 0.0) throw InvalidArgumentError("young_bound requires a, b >= 0");
    if (sigma < 1.0) throw InvalidArgumentError("young_bound requires sigma >= 1");
    return YoungBound{a * b, std::exp(sigma * a) + entropy_l(b) / sigma};
}

void write_control_csv(const std::string& path, const ControlGrid& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgumentError("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < g.n_t; ++i) {
        for (std::size_t j = 0; j < g.m; ++j) {
            if (j) out << ',';
            out << csv::format(g.at(i, j));
        }
        out << '\n';
    }
}

ControlGrid read_control_csv(const std::string& path, double T) {
    std::ifstream in(path);
    if (!in) throw InvalidArgumentError("cannot open " + path);
    std::vector<double> values;
    std::size_t m = 0, n_t = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::size_t cols = 0;
        while (std::getline(ss, tok, ',')) {
            values.push_back(std::stod(tok));
            ++cols;
        }
        if (m == 0) m = cols;
        if (cols != m) throw InvalidArgumentError("ragged control CSV: " + path);
        ++n_t;
    }
    return make_control(n_t, m, T, std::move(values));
}

}  // namespace pmld
