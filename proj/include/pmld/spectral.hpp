#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pmld {

enum class Basis {
    dirichlet_sine,  // e_k(xi) = sqrt(2/pi) sin(k xi) on (0,pi)
    abstract_spectrum,
};

// The negative-definite operator L, stored as the positive ascending spectrum
// of -L together with a basis descriptor. L acts mode-wise as -lambda_k.
struct OperatorSpec {
    std::vector<double> eigenvalues;
    Basis basis = Basis::dirichlet_sine;

    std::size_t modes() const { return eigenvalues.size(); }
};

// A state as finitely many eigen-coefficients of L. The single state
// representation used everywhere.
struct SpectralField {
    std::vector<double> coeffs;

    std::size_t size() const { return coeffs.size(); }
    double& operator[](std::size_t k) { return coeffs[k]; }
    double operator[](std::size_t k) const { return coeffs[k]; }
};

SpectralField zero_field(std::size_t K);

// Elementwise arithmetic.
SpectralField add(const SpectralField& a, const SpectralField& b);
SpectralField sub(const SpectralField& a, const SpectralField& b);
SpectralField scale(double s, const SpectralField& a);
void axpy(double s, const SpectralField& x, SpectralField& y);  // y += s*x

OperatorSpec make_operator_laplacian(std::size_t K);
OperatorSpec make_operator_fractional(double alpha, std::size_t K);
OperatorSpec make_operator_explicit(std::vector<double> eigenvalues);

// L u: coeffs_k -> -lambda_k coeffs_k.
SpectralField apply_L(const OperatorSpec& op, const SpectralField& u);

// Diagonal multiplier m(lambda_k) applied mode-wise. Serves the smoothing
// transforms (1-L)^{+-1/2}, resolvents (alpha-L)^{-1/2}, and friends.
SpectralField spectral_multiplier(const OperatorSpec& op,
                                  const std::function<double(double)>& m,
                                  const SpectralField& u);

enum class NormKind {
    l2,        // ( sum c_k^2 )^{1/2}
    form,      // ( sum (1+lambda_k) c_k^2 )^{1/2}
    dual,      // ( sum c_k^2 / (1+lambda_k) )^{1/2}
    dual_eps,  // ( sum c_k^2 / (eps+lambda_k) )^{1/2}
};

double norm(const SpectralField& u, const OperatorSpec& op, NormKind which, double eps = 0.0);

double norm_l2(const SpectralField& u);
double norm_form(const SpectralField& u, const OperatorSpec& op);
double norm_dual(const SpectralField& u, const OperatorSpec& op);
double norm_dual_eps(const SpectralField& u, const OperatorSpec& op, double eps);

double inner_l2(const SpectralField& a, const SpectralField& b);
// Dual pairing sum a_k b_k / (1+lambda_k).
double inner_dual(const SpectralField& a, const SpectralField& b, const OperatorSpec& op);

// Collocation values at xi_j = j*pi/(M+1), j=1..M, via the discrete sine
// transform (direct O(KM) matrix application; desk scale favors clarity).
std::vector<double> to_grid(const SpectralField& u, const OperatorSpec& op, std::size_t M);
SpectralField from_grid(const std::vector<double>& values, const OperatorSpec& op, std::size_t K);

// Precomputed sine tables for repeated transforms of the same shape.
class DstPlan {
public:
    DstPlan(std::size_t K, std::size_t M);

    std::size_t modes() const { return K_; }
    std::size_t grid_size() const { return M_; }

    void to_grid(const SpectralField& u, std::vector<double>& values) const;
    void from_grid(const std::vector<double>& values, SpectralField& u) const;

private:
    std::size_t K_;
    std::size_t M_;
    std::vector<double> synth_;    // K x M: e_k(xi_j)
    double analysis_factor_;       // sqrt(2*pi)/(M+1)
};

}  // namespace pmld
