#pragma once

#include <cstddef>
#include <vector>

#include "pmld/control.hpp"
#include "pmld/marks.hpp"
#include "pmld/nonlinearity.hpp"
#include "pmld/spectral.hpp"

namespace pmld {

struct SolverConfig {
    std::size_t n_t = 200;   // uniform time cells
    std::size_t M = 0;       // collocation size; 0 means 2K
    double fp_tol = 1e-10;   // inner fixed-point tolerance, dual norm
    int fp_max = 200;        // max inner iterations
    double relax = 1.0;      // Picard damping in (0,1]; the map contracts undamped
    bool adapt = true;       // halve dt and retry on non-convergence
    bool track_psi_integral = false;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;
    // Running trapezoid of int_0^t psi(X) ds when tracked (same length as times).
    std::vector<SpectralField> psi_integral;
};

// Everything that defines one evolution problem except the control.
struct SkeletonProblem {
    OperatorSpec op;
    PsiSpec psi;
    JumpCoefficient fc;
    MarkSpace marks;
    SpectralField x0;
    double T = 1.0;
};

// Deterministic controlled flow
//   dX = L psi(X) dt + [ int_Z f(t,X,z)(g-1) nu(dz) ] dt,  X(0) = x0,
// stepped by a trapezoidal stiff solve (damped Picard through the resolvent
// split psi = lip*id + R) with the drift explicit at the left endpoint.
Trajectory solve_skeleton(const SkeletonProblem& problem, const ControlGrid& g,
                          const SolverConfig& cfg);

// Regularized relatives: spectrum shifted by eps (L -> L - eps) and psi
// replaced by psi + delta*id. eps = delta = 0 reproduces solve_skeleton
// bit-exactly.
Trajectory solve_regularized(const SkeletonProblem& problem, const ControlGrid& g,
                             const SolverConfig& cfg, double eps, double delta);

struct AprioriReport {
    double sup_l2_sq = 0.0;   // sup_t |X(t)|_2^2
    double c_l3 = 0.0;        // int_0^T h_3(s) ds on the actual control
    double bound_value = 0.0; // (2|x|^2 + 8 c^2 + 4T) e^{8 c^2 + 4T}
    bool bound_ok = false;
};

AprioriReport apriori_report(const Trajectory& traj, const SpectralField& x0, double T,
                             double c_l3);

// Convenience: evaluates c_l3 from the actual control before checking.
AprioriReport apriori_report(const Trajectory& traj, const SkeletonProblem& problem,
                             const ControlGrid& g);

// sup over shared output times of the dual-norm distance.
double sup_dual_distance(const Trajectory& a, const Trajectory& b, const OperatorSpec& op);

struct ContinuityReport {
    std::vector<double> distances;  // d_n = sup_t ||X^{g_n} - X^{g}||_dual
};

ContinuityReport continuity_experiment(const SkeletonProblem& problem,
                                       const std::vector<ControlGrid>& g_seq,
                                       const ControlGrid& g_limit, const SolverConfig& cfg);

}  // namespace pmld
