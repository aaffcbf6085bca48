#include "pmld/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "pmld/errors.hpp"
#include "pmld/rng.hpp"

namespace pmld {

PsiSpec make_psi_linear(double k0) {
    if (k0 < 0.0) throw InvalidArgumentError("linear slope must be >= 0");
    PsiSpec psi;
    psi.kind = PsiKind::linear;
    psi.k0 = k0;
    psi.lip = k0;
    psi.alpha_tilde = 1.0 / (psi.lip + 1.0);
    return psi;
}

PsiSpec make_psi_stefan(double a, double b, double rho) {
    if (!(a > 0.0) || !(b > 0.0) || !(rho > 0.0)) {
        throw InvalidArgumentError("Stefan parameters a, b, rho must be positive");
    }
    PsiSpec psi;
    psi.kind = PsiKind::stefan;
    psi.a = a;
    psi.b = b;
    psi.rho = rho;
    psi.lip = std::max(a, b);
    psi.alpha_tilde = 1.0 / (psi.lip + 1.0);
    return psi;
}

PsiSpec make_psi_tanh(double k0, double s) {
    if (k0 < 0.0) throw InvalidArgumentError("tanh slope must be >= 0");
    if (!(s > 0.0)) throw InvalidArgumentError("tanh scale must be positive");
    PsiSpec psi;
    psi.kind = PsiKind::tanh_saturating;
    psi.k0 = k0;
    psi.s = s;
    psi.lip = k0;
    psi.alpha_tilde = 1.0 / (psi.lip + 1.0);
    return psi;
}

double psi_eval(const PsiSpec& psi, double r) {
    switch (psi.kind) {
        case PsiKind::linear:
            return psi.k0 * r;
        case PsiKind::stefan:
            if (r < 0.0) return psi.a * r;
            if (r <= psi.rho) return 0.0;
            return psi.b * (r - psi.rho);
        case PsiKind::tanh_saturating:
            return psi.k0 * psi.s * std::tanh(r / psi.s);
    }
    return 0.0;
}

SpectralField apply_psi(const PsiSpec& psi, const OperatorSpec& op, const SpectralField& u,
                        std::size_t M) {
    if (op.modes() != u.size()) {
        throw DimensionMismatchError("field/operator mode count mismatch in apply_psi");
    }
    if (psi.kind == PsiKind::linear) return scale(psi.k0, u);
    if (op.basis != Basis::dirichlet_sine) {
        throw UnsupportedBasisError("nonlinear psi requires the Dirichlet sine basis");
    }
    DstPlan plan(u.size(), M);
    std::vector<double> values;
    plan.to_grid(u, values);
    for (double& v : values) v = psi_eval(psi, v);
    SpectralField out;
    plan.from_grid(values, out);
    return out;
}

H1Report check_H1(const std::function<double(double)>& psi, int n_samples, double lo, double hi,
                  std::uint64_t seed) {
    H1Report report;
    report.psi0 = psi(0.0);
    if (n_samples < 2) n_samples = 2;
    Rng rng(RngSpec{seed, 0});
    for (int i = 0; i < n_samples; ++i) {
        double r = rng.uniform(lo, hi);
        double rp = rng.uniform(lo, hi);
        if (r > rp) std::swap(r, rp);
        if (r == rp) continue;
        const double dpsi = psi(rp) - psi(r);
        if (dpsi < report.worst_monotone_violation) report.worst_monotone_violation = dpsi;
        report.lip_observed = std::max(report.lip_observed, std::abs(dpsi) / (rp - r));
    }
    report.monotone = report.worst_monotone_violation >= -1e-12;
    return report;
}

H1Report check_H1(const PsiSpec& psi, int n_samples, double lo, double hi, std::uint64_t seed) {
    return check_H1([&psi](double r) { return psi_eval(psi, r); }, n_samples, lo, hi, seed);
}

}  // namespace pmld
