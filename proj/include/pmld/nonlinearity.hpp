#pragma once

#include <cstdint>
#include <functional>

#include "pmld/spectral.hpp"

namespace pmld {

enum class PsiKind {
    linear,           // psi(r) = k0 r
    stefan,           // a r (r<0) | 0 (0<=r<=rho) | b (r-rho) (r>rho)
    tanh_saturating,  // k0 s tanh(r/s)
};

// A monotone nondecreasing Lipschitz scalar nonlinearity with a certified
// Lipschitz constant. The constant is fixed analytically per family; sampling
// only cross-checks it.
struct PsiSpec {
    PsiKind kind = PsiKind::linear;
    double a = 0.0;
    double b = 0.0;
    double rho = 0.0;
    double k0 = 0.0;
    double s = 0.0;
    double lip = 0.0;          // certified Lipschitz constant
    double alpha_tilde = 0.0;  // 1/(lip+1)
};

PsiSpec make_psi_linear(double k0);
PsiSpec make_psi_stefan(double a, double b, double rho);
PsiSpec make_psi_tanh(double k0, double s);

double psi_eval(const PsiSpec& psi, double r);

// Pointwise action of psi on the collocation grid, transformed back to
// coefficients. Linear psi acts directly on coefficients (works for either
// basis); nonlinear psi requires the sine basis.
SpectralField apply_psi(const PsiSpec& psi, const OperatorSpec& op, const SpectralField& u,
                        std::size_t M);

struct H1Report {
    bool monotone = true;
    double lip_observed = 0.0;
    double psi0 = 0.0;
    double worst_monotone_violation = 0.0;  // most negative (psi(r')-psi(r)) with r' > r
};

// Samples pairs on [lo,hi] and reports worst-case violations of monotonicity
// and the claimed Lipschitz constant. Diagnostic: never throws.
H1Report check_H1(const std::function<double(double)>& psi, int n_samples, double lo, double hi,
                  std::uint64_t seed = 7);
H1Report check_H1(const PsiSpec& psi, int n_samples, double lo, double hi,
                  std::uint64_t seed = 7);

}  // namespace pmld
