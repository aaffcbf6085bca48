#pragma once

// Internal trapezoidal stepper shared by the deterministic and jump solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "pmld/errors.hpp"
#include "pmld/nonlinearity.hpp"
#include "pmld/skeleton.hpp"
#include "pmld/spectral.hpp"

namespace pmld::detail {

using DriftFn = std::function<SpectralField(double t, const SpectralField& x)>;

// One step of
//   X+ = x + (dt/2) L_eps [psi_d(X+) + psi_d(x)] + dt * drift(t_left, x),
// with L_eps = -(lambda+eps) per mode and psi_d = psi + delta*id, solved by
// damped Picard through the resolvent split psi_d = (lip+delta)*id + R,
// R = psi - lip*id. The per-mode Picard multiplier stays strictly below one
// for every dt, so the iteration contracts; non-convergence within fp_max
// triggers recursive step halving when cfg.adapt is set. Linear psi makes
// R vanish and the step collapses to one exact diagonal solve.
class TrapezoidStepper {
public:
    TrapezoidStepper(const OperatorSpec& op, const PsiSpec& psi, const SolverConfig& cfg,
                     double eps, double delta)
        : op_(op),
          psi_(psi),
          cfg_(cfg),
          eps_(eps),
          delta_(delta),
          k_eff_(psi.lip + delta) {
        const std::size_t K = op.modes();
        lam_eps_.resize(K);
        for (std::size_t k = 0; k < K; ++k) lam_eps_[k] = op.eigenvalues[k] + eps;
        if (psi_.kind != PsiKind::linear) {
            const std::size_t M = cfg.M ? cfg.M : 2 * K;
            plan_.emplace(K, M);
        }
    }

    // Pointwise psi through the cached transform plan.
    SpectralField apply_psi_planned(const SpectralField& u) const {
        if (psi_.kind == PsiKind::linear) return scale(psi_.k0, u);
        plan_->to_grid(u, grid_scratch_);
        for (double& v : grid_scratch_) v = psi_eval(psi_, v);
        SpectralField out;
        plan_->from_grid(grid_scratch_, out);
        return out;
    }

    void advance(SpectralField& x, double t0, double dt, const DriftFn& drift) const {
        advance_impl(x, t0, dt, drift, 0);
    }

private:
    void advance_impl(SpectralField& x, double t0, double dt, const DriftFn& drift,
                      int depth) const {
        if (try_step(x, t0, dt, drift)) return;
        if (!cfg_.adapt || depth >= 24) {
            throw StepFailureError("inner fixed point did not converge", t0, dt, last_residual_);
        }
        advance_impl(x, t0, 0.5 * dt, drift, depth + 1);
        advance_impl(x, t0 + 0.5 * dt, 0.5 * dt, drift, depth + 1);
    }

    bool try_step(SpectralField& x, double t0, double dt, const DriftFn& drift) const {
        const std::size_t K = x.size();
        const double dt2 = 0.5 * dt;
        const SpectralField d = drift(t0, x);

        // Constant part of the right-hand side: x + (dt/2) L_eps psi_d(x) + dt*d.
        SpectralField psi_x = apply_psi_planned(x);
        if (delta_ != 0.0) axpy(delta_, x, psi_x);
        SpectralField rhs_base = x;
        std::vector<double> denom(K);
        for (std::size_t k = 0; k < K; ++k) {
            rhs_base[k] += -dt2 * lam_eps_[k] * psi_x[k] + dt * d[k];
            denom[k] = 1.0 + dt2 * k_eff_ * lam_eps_[k];
        }

        if (psi_.kind == PsiKind::linear) {
            for (std::size_t k = 0; k < K; ++k) x[k] = rhs_base[k] / denom[k];
            return true;
        }

        // Contraction factor bound of the damped map; the stop threshold is
        // tightened so the distance to the fixed point is <= fp_tol.
        const double omega = cfg_.relax;
        double q = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            q = std::max(q, dt2 * lam_eps_[k] * psi_.lip / denom[k]);
        }
        const double f = (1.0 - omega) + omega * q;
        const double threshold = cfg_.fp_tol * std::min(1.0, (1.0 - f) / std::max(f, 1e-300));

        SpectralField cur = x;
        SpectralField next = x;
        for (int iter = 0; iter < cfg_.fp_max; ++iter) {
            // R(cur) = psi(cur) - lip*cur.
            SpectralField r = apply_psi_planned(cur);
            axpy(-psi_.lip, cur, r);
            double residual_sq = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const double candidate = (rhs_base[k] - dt2 * lam_eps_[k] * r[k]) / denom[k];
                const double updated = (1.0 - omega) * cur[k] + omega * candidate;
                const double inc = updated - cur[k];
                residual_sq += inc * inc / (1.0 + op_.eigenvalues[k]);
                next[k] = updated;
            }
            std::swap(cur, next);
            last_residual_ = std::sqrt(residual_sq);
            if (last_residual_ <= threshold) {
                x = cur;
                return true;
            }
        }
        return false;
    }

    const OperatorSpec& op_;
    const PsiSpec& psi_;
    const SolverConfig& cfg_;
    double eps_;
    double delta_;
    double k_eff_;
    std::vector<double> lam_eps_;
    std::optional<DstPlan> plan_;
    mutable std::vector<double> grid_scratch_;
    mutable double last_residual_ = 0.0;
};

}  // namespace pmld::detail
