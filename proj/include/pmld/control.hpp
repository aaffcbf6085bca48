#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pmld {

struct MarkSpace;  // marks.hpp

// A nonnegative control g on uniform time cells x marks, together with the
// budget it was last projected to (if any). Cost and membership live in
// q_cost / project_to_budget.
struct ControlGrid {
    std::size_t n_t = 0;
    std::size_t m = 0;
    double T = 0.0;
    std::vector<double> values;  // row-major: cell * m + j
    std::optional<double> budget;

    double dt() const { return T / static_cast<double>(n_t); }
    double at(std::size_t cell, std::size_t j) const { return values[cell * m + j]; }
    double& at(std::size_t cell, std::size_t j) { return values[cell * m + j]; }
    // Cell index for a time in [0,T]; the last cell is closed on the right.
    std::size_t cell_of(double t) const;
};

ControlGrid constant_control(std::size_t n_t, std::size_t m, double T, double value);
ControlGrid make_control(std::size_t n_t, std::size_t m, double T, std::vector<double> values);

// Entropy integrand l(r) = r log r - r + 1, with l(0) = 1 by continuity.
double entropy_l(double r);

// Q(g) = sum_{cells,marks} l(g) dt nu_j.
double q_cost(const ControlGrid& g, const MarkSpace& marks);

// Returns g when Q(g) <= budget; otherwise the convex interpolation
// theta*g + (1-theta)*1 with theta chosen by bisection so that the cost lands
// in [budget - 1e-9, budget]. Always feasible since l(1) = 0.
ControlGrid project_to_budget(const ControlGrid& g, const MarkSpace& marks, double budget);

struct YoungBound {
    double lhs;  // a*b
    double rhs;  // e^{sigma a} + l(b)/sigma
};

// Exponential Young inequality a*b <= e^{sigma a} + l(b)/sigma for sigma >= 1.
YoungBound young_bound(double a, double b, double sigma);

// Controls serialize as plain CSV matrices: rows = time cells, cols = marks.
void write_control_csv(const std::string& path, const ControlGrid& g);
ControlGrid read_control_csv(const std::string& path, double T);

}  // namespace pmld
