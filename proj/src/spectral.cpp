#include "pmld/spectral.hpp"

#include <cmath>
#include <numbers>

#include "pmld/errors.hpp"

namespace pmld {

namespace {

void require_same_size(const OperatorSpec& op, const SpectralField& u) {
    if (op.modes() != u.size()) {
        throw DimensionMismatchError("field has " + std::to_string(u.size()) +
                                     " coefficients but operator has " +
                                     std::to_string(op.modes()) + " modes");
    }
}

void validate_spectrum(const std::vector<double>& lambdas) {
    if (lambdas.empty()) throw InvalidSpectrumError("spectrum must have at least one eigenvalue");
    double prev = 0.0;
    for (double lam : lambdas) {
        if (!(lam > 0.0) || !std::isfinite(lam)) {
            throw InvalidSpectrumError("eigenvalues must be positive and finite");
        }
        if (lam < prev) throw InvalidSpectrumError("eigenvalues must be ascending");
        prev = lam;
    }
}

}  // namespace

SpectralField zero_field(std::size_t K) { return SpectralField{std::vector<double>(K, 0.0)}; }

SpectralField add(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += b[k];
    return out;
}

SpectralField sub(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= b[k];
    return out;
}

SpectralField scale(double s, const SpectralField& a) {
    SpectralField out = a;
    for (double& c : out.coeffs) c *= s;
    return out;
}

void axpy(double s, const SpectralField& x, SpectralField& y) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += s * x[k];
}

OperatorSpec make_operator_laplacian(std::size_t K) {
    if (K < 1) throw InvalidArgumentError("mode count must be >= 1");
    std::vector<double> lambdas(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double kk = static_cast<double>(k + 1);
        lambdas[k] = kk * kk;
    }
    return OperatorSpec{std::move(lambdas), Basis::dirichlet_sine};
}

OperatorSpec make_operator_fractional(double alpha, std::size_t K) {
    if (K < 1) throw InvalidArgumentError("mode count must be >= 1");
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidArgumentError("alpha must lie in (0,1]");
    std::vector<double> lambdas(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double kk = static_cast<double>(k + 1);
        lambdas[k] = std::pow(kk * kk, alpha);
    }
    return OperatorSpec{std::move(lambdas), Basis::dirichlet_sine};
}

OperatorSpec make_operator_explicit(std::vector<double> eigenvalues) {
    validate_spectrum(eigenvalues);
    return OperatorSpec{std::move(eigenvalues), Basis::abstract_spectrum};
}

SpectralField apply_L(const OperatorSpec& op, const SpectralField& u) {
    require_same_size(op, u);
    SpectralField out = u;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= -op.eigenvalues[k];
    return out;
}

SpectralField spectral_multiplier(const OperatorSpec& op,
                                  const std::function<double(double)>& m,
                                  const SpectralField& u) {
    require_same_size(op, u);
    SpectralField out = u;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double mk = m(op.eigenvalues[k]);
        if (!std::isfinite(mk)) {
            throw SingularMultiplierError("multiplier undefined at eigenvalue " +
                                          std::to_string(op.eigenvalues[k]));
        }
        out[k] *= mk;
    }
    return out;
}

double norm(const SpectralField& u, const OperatorSpec& op, NormKind which, double eps) {
    if (which != NormKind::l2) require_same_size(op, u);
    if (which == NormKind::dual_eps && !(eps > 0.0)) {
        throw InvalidArgumentError("eps must be positive for the eps-weighted dual norm");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double c2 = u[k] * u[k];
        switch (which) {
            case NormKind::l2: sum += c2; break;
            case NormKind::form: sum += (1.0 + op.eigenvalues[k]) * c2; break;
            case NormKind::dual: sum += c2 / (1.0 + op.eigenvalues[k]); break;
            case NormKind::dual_eps: sum += c2 / (eps + op.eigenvalues[k]); break;
        }
    }
    return std::sqrt(sum);
}

double norm_l2(const SpectralField& u) {
    double sum = 0.0;
    for (double c : u.coeffs) sum += c * c;
    return std::sqrt(sum);
}

double norm_form(const SpectralField& u, const OperatorSpec& op) {
    return norm(u, op, NormKind::form);
}

double norm_dual(const SpectralField& u, const OperatorSpec& op) {
    return norm(u, op, NormKind::dual);
}

double norm_dual_eps(const SpectralField& u, const OperatorSpec& op, double eps) {
    return norm(u, op, NormKind::dual_eps, eps);
}

double inner_l2(const SpectralField& a, const SpectralField& b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
    return sum;
}

double inner_dual(const SpectralField& a, const SpectralField& b, const OperatorSpec& op) {
    require_same_size(op, a);
    require_same_size(op, b);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sum += a[k] * b[k] / (1.0 + op.eigenvalues[k]);
    }
    return sum;
}

DstPlan::DstPlan(std::size_t K, std::size_t M) : K_(K), M_(M) {
    if (M < 2 * K) throw InvalidArgumentError("collocation size must be >= 2K (anti-aliasing margin)");
    const double amp = std::sqrt(2.0 / std::numbers::pi);
    synth_.resize(K * M);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t j = 0; j < M; ++j) {
            const double xi = static_cast<double>(j + 1) * std::numbers::pi / static_cast<double>(M + 1);
            synth_[k * M + j] = amp * std::sin(static_cast<double>(k + 1) * xi);
        }
    }
    analysis_factor_ = std::sqrt(2.0 * std::numbers::pi) / static_cast<double>(M + 1);
}

void DstPlan::to_grid(const SpectralField& u, std::vector<double>& values) const {
    values.assign(M_, 0.0);
    for (std::size_t k = 0; k < K_; ++k) {
        const double c = u[k];
        if (c == 0.0) continue;
        const double* row = &synth_[k * M_];
        for (std::size_t j = 0; j < M_; ++j) values[j] += c * row[j];
    }
}

void DstPlan::from_grid(const std::vector<double>& values, SpectralField& u) const {
    u.coeffs.assign(K_, 0.0);
    const double amp = std::sqrt(2.0 / std::numbers::pi);
    for (std::size_t k = 0; k < K_; ++k) {
        const double* row = &synth_[k * M_];
        double sum = 0.0;
        // row[j] = amp*sin(...), so divide the amplitude back out once.
        for (std::size_t j = 0; j < M_; ++j) sum += values[j] * row[j];
        u[k] = sum * analysis_factor_ / amp;
    }
}

std::vector<double> to_grid(const SpectralField& u, const OperatorSpec& op, std::size_t M) {
    require_same_size(op, u);
    if (op.basis != Basis::dirichlet_sine) {
        throw UnsupportedBasisError("collocation requires the Dirichlet sine basis");
    }
    DstPlan plan(u.size(), M);
    std::vector<double> values;
    plan.to_grid(u, values);
    return values;
}

SpectralField from_grid(const std::vector<double>& values, const OperatorSpec& op, std::size_t K) {
    if (op.basis != Basis::dirichlet_sine) {
        throw UnsupportedBasisError("collocation requires the Dirichlet sine basis");
    }
    if (K > op.modes()) throw DimensionMismatchError("requested more modes than the operator has");
    DstPlan plan(K, values.size());
    SpectralField u;
    plan.from_grid(values, u);
    return u;
}

}  // namespace pmld
