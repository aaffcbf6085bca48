#include "pmld/marks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmld/errors.hpp"
#include "pmld/rng.hpp"

namespace pmld {

double MarkSpace::total_mass() const {
    double sum = 0.0;
    for (double w : weights) sum += w;
    return sum;
}

MarkSpace make_mark_space(std::vector<double> marks, std::vector<double> weights) {
    if (marks.empty() || marks.size() != weights.size()) {
        throw DimensionMismatchError("mark space needs matching nonempty marks and weights");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw InvalidArgumentError("mark weights must be positive and finite");
        }
    }
    return MarkSpace{std::move(marks), std::move(weights)};
}

double beta_eval(const BetaProfile& beta, double t) {
    switch (beta.kind) {
        case BetaProfile::Kind::constant_one: return 1.0;
        case BetaProfile::Kind::cosine: return std::cos(beta.omega * t);
    }
    return 1.0;
}

double JumpCoefficient::l1(double t, std::size_t j) const {
    return std::abs(gain) * sigma[j] * std::abs(beta_eval(beta, t));
}

double JumpCoefficient::l23(double t, std::size_t j) const {
    return sigma[j] * std::abs(beta_eval(beta, t)) * bound_const;
}

JumpCoefficient make_jump_coefficient(const OperatorSpec& op, std::vector<double> sigma,
                                      BetaProfile beta, double gain, SpectralField eta) {
    if (eta.size() != op.modes()) {
        throw DimensionMismatchError("eta must have the operator's mode count");
    }
    for (double s : sigma) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw InvalidArgumentError("sigma amplitudes must be finite and >= 0");
        }
    }
    JumpCoefficient fc;
    fc.sigma = std::move(sigma);
    fc.beta = beta;
    fc.gain = gain;
    fc.bound_const = std::max({std::abs(gain), norm_dual(eta, op), norm_l2(eta), 1.0});
    fc.eta = std::move(eta);
    return fc;
}

SpectralField eval_f(const JumpCoefficient& fc, const MarkSpace& marks, double t,
                     const SpectralField& x, std::size_t z_index) {
    if (z_index >= marks.size()) throw InvalidArgumentError("mark index out of range");
    if (z_index >= fc.sigma.size()) throw DimensionMismatchError("sigma shorter than mark space");
    const double amp = fc.sigma[z_index] * beta_eval(fc.beta, t);
    SpectralField out = fc.eta;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = amp * (fc.gain * x[k] + out[k]);
    return out;
}

H2Report check_H2(const JumpCoefficient& fc, const MarkSpace& marks, const OperatorSpec& op,
                  int n_samples, std::uint64_t seed) {
    H2Report report;
    report.min_slack_lipschitz = std::numeric_limits<double>::infinity();
    report.min_slack_growth_dual = std::numeric_limits<double>::infinity();
    report.min_slack_growth_l2 = std::numeric_limits<double>::infinity();
    report.min_slack_eps_variant = std::numeric_limits<double>::infinity();
    const double eps_values[] = {0.1, 0.5, 1.0};
    Rng rng(RngSpec{seed, 0});
    const std::size_t K = op.modes();
    for (int i = 0; i < n_samples; ++i) {
        const double t = rng.uniform(0.0, 1.0);
        SpectralField x = zero_field(K), y = zero_field(K);
        for (std::size_t k = 0; k < K; ++k) {
            x[k] = rng.normal();
            y[k] = rng.normal();
        }
        for (std::size_t j = 0; j < marks.size(); ++j) {
            const SpectralField fx = eval_f(fc, marks, t, x, j);
            const SpectralField fy = eval_f(fc, marks, t, y, j);
            const SpectralField diff = sub(fx, fy);
            const SpectralField xy = sub(x, y);
            report.min_slack_lipschitz =
                std::min(report.min_slack_lipschitz,
                         fc.l1(t, j) * norm_dual(xy, op) - norm_dual(diff, op));
            report.min_slack_growth_dual =
                std::min(report.min_slack_growth_dual,
                         fc.l23(t, j) * (norm_dual(x, op) + 1.0) - norm_dual(fx, op));
            report.min_slack_growth_l2 =
                std::min(report.min_slack_growth_l2,
                         fc.l23(t, j) * (norm_l2(x) + 1.0) - norm_l2(fx));
            for (double eps : eps_values) {
                report.min_slack_eps_variant =
                    std::min(report.min_slack_eps_variant,
                             fc.l1(t, j) / std::sqrt(eps) * norm_dual_eps(xy, op, eps) -
                                 norm_dual_eps(diff, op, eps));
            }
        }
    }
    const double tol = -1e-9;
    report.all_ok = report.min_slack_lipschitz >= tol && report.min_slack_growth_dual >= tol &&
                    report.min_slack_growth_l2 >= tol && report.min_slack_eps_variant >= tol;
    return report;
}

namespace {

// Time integral of exp(sigma * l23(t,j)) over [0,T] (trapezoid on a fixed
// fine grid; exact for the constant profile).
double integral_exp_l(const JumpCoefficient& fc, std::size_t j, double sigma, double T) {
    if (fc.beta.kind == BetaProfile::Kind::constant_one) {
        return T * std::exp(sigma * fc.l23(0.0, j));
    }
    const int cells = 512;
    const double dt = T / cells;
    double sum = 0.0;
    for (int i = 0; i <= cells; ++i) {
        const double w = (i == 0 || i == cells) ? 0.5 : 1.0;
        sum += w * std::exp(sigma * fc.l23(i * dt, j));
    }
    return sum * dt;
}

double integral_l(const JumpCoefficient& fc, std::size_t j, double T) {
    if (fc.beta.kind == BetaProfile::Kind::constant_one) return T * fc.l23(0.0, j);
    const int cells = 512;
    const double dt = T / cells;
    double sum = 0.0;
    for (int i = 0; i <= cells; ++i) {
        const double w = (i == 0 || i == cells) ? 0.5 : 1.0;
        sum += w * fc.l23(i * dt, j);
    }
    return sum * dt;
}

}  // namespace

TailCompactResult tail_compact(const MarkSpace& marks, const JumpCoefficient& fc, double N,
                               double eps_tail, double T) {
    if (!(eps_tail > 0.0)) throw InvalidArgumentError("eps_tail must be positive");
    if (!(N > 0.0)) throw InvalidArgumentError("budget must be positive");
    const std::size_t m = marks.size();

    // certificate(n) = min over sigma of
    //   sum_{j>n, sigma_j>0} nu_j [ int e^{sigma l} + int l ] + N/sigma,
    // from int l|g-1| <= int l g + int l and the exponential Young bound
    // l*g <= e^{sigma l} + l(g)/sigma with int_tail l(g) <= Q(g) <= N.
    auto certificate = [&](std::size_t n) {
        bool tail_active = false;
        for (std::size_t j = n; j < m; ++j) {
            if (fc.sigma[j] > 0.0) tail_active = true;
        }
        if (!tail_active) return 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (int p = 0; p <= 40; ++p) {
            const double sigma = std::ldexp(1.0, p);  // 2^p
            double value = N / sigma;
            for (std::size_t j = n; j < m; ++j) {
                if (fc.sigma[j] <= 0.0) continue;
                value += marks.weights[j] *
                         (integral_exp_l(fc, j, sigma, T) + integral_l(fc, j, T));
            }
            best = std::min(best, value);
        }
        return best;
    };

    for (std::size_t n = 1; n <= m; ++n) {
        const double cert = certificate(n);
        if (cert <= eps_tail) return TailCompactResult{n, cert};
    }
    throw InfeasibleTruncationError("no compact prefix certifies the requested tail bound");
}

double aggregate_h(int which, const JumpCoefficient& fc, const MarkSpace& marks,
                   const ControlGrid& g, std::size_t t_cell) {
    if (which < 1 || which > 3) throw InvalidArgumentError("h index must be 1, 2, or 3");
    if (g.m != marks.size()) throw DimensionMismatchError("control grid marks mismatch mark space");
    if (t_cell >= g.n_t) throw InvalidArgumentError("time cell out of range");
    const double t = static_cast<double>(t_cell) * g.dt();
    double sum = 0.0;
    for (std::size_t j = 0; j < marks.size(); ++j) {
        const double l = which == 1 ? fc.l1(t, j) : fc.l23(t, j);
        sum += l * std::abs(g.at(t_cell, j) - 1.0) * marks.weights[j];
    }
    return sum;
}

double integrate_h(int which, const JumpCoefficient& fc, const MarkSpace& marks,
                   const ControlGrid& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.n_t; ++i) sum += aggregate_h(which, fc, marks, g, i);
    return sum * g.dt();
}

}  // namespace pmld
