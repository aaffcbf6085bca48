#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "pmld/control.hpp"
#include "pmld/spectral.hpp"

namespace pmld {

// Finite weighted mark space Z with measure nu. Compact exhaustion K_n is the
// index prefix {z_1..z_n}.
struct MarkSpace {
    std::vector<double> marks;
    std::vector<double> weights;  // nu({z_j}) > 0

    std::size_t size() const { return marks.size(); }
    double total_mass() const;
};

MarkSpace make_mark_space(std::vector<double> marks, std::vector<double> weights);

struct BetaProfile {
    enum class Kind { constant_one, cosine } kind = Kind::constant_one;
    double omega = 0.0;  // cosine frequency
};

double beta_eval(const BetaProfile& beta, double t);

// Jump coefficient f(t,x,z) = sigma(z) beta(t) (gain*x + eta), affine in the
// state so that the Lipschitz bound l1 is exact rather than estimated.
struct JumpCoefficient {
    std::vector<double> sigma;  // per-mark amplitude >= 0
    BetaProfile beta;
    double gain = 0.0;  // multiplicative coupling
    SpectralField eta;  // additive profile
    double bound_const = 1.0;  // max(|gain|, ||eta||_dual, |eta|_2, 1)

    // Bound functions certified by construction:
    // l1 controls the state-Lipschitz bound, l23 the linear-growth bounds.
    double l1(double t, std::size_t j) const;
    double l23(double t, std::size_t j) const;
};

JumpCoefficient make_jump_coefficient(const OperatorSpec& op, std::vector<double> sigma,
                                      BetaProfile beta, double gain, SpectralField eta);

SpectralField eval_f(const JumpCoefficient& fc, const MarkSpace& marks, double t,
                     const SpectralField& x, std::size_t z_index);

struct H2Report {
    // Minimum slack (bound minus realized value); nonnegative means the
    // hypothesis holds on every sample.
    double min_slack_lipschitz = 0.0;
    double min_slack_growth_dual = 0.0;
    double min_slack_growth_l2 = 0.0;
    double min_slack_eps_variant = 0.0;
    bool all_ok = false;
};

H2Report check_H2(const JumpCoefficient& fc, const MarkSpace& marks, const OperatorSpec& op,
                  int n_samples, std::uint64_t seed = 11);

struct TailCompactResult {
    std::size_t n = 0;        // smallest compact prefix achieving the bound
    double certificate = 0.0; // certified tail value at n
};

// Smallest prefix K_n whose tail certificate
//   sup_i sup_{Q(g)<=N} int_0^T int_{K_n^c} l_i |g-1| dnu ds
// is <= eps_tail. Certified through |g-1| <= g+1 and the exponential Young
// inequality; marks with sigma = 0 contribute exactly zero.
TailCompactResult tail_compact(const MarkSpace& marks, const JumpCoefficient& fc, double N,
                               double eps_tail, double T);

// h_i at one time cell: sum_j l_i(t_left, z_j) |g(cell,j)-1| nu_j.
double aggregate_h(int which, const JumpCoefficient& fc, const MarkSpace& marks,
                   const ControlGrid& g, std::size_t t_cell);

// int_0^T h_i(s) ds on the control's own grid (left endpoints).
double integrate_h(int which, const JumpCoefficient& fc, const MarkSpace& marks,
                   const ControlGrid& g);

}  // namespace pmld
