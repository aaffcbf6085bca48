#include "pmld/stats.hpp"

#include <algorithm>
#include <cmath>

#include "pmld/errors.hpp"

namespace pmld::stats {

std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
    if (xs.empty()) throw InvalidArgumentError("mean of empty sample");
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    if (xs.size() == 1) return {mean, 0.0};
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidArgumentError("linear fit needs >= 2 matched points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw InvalidArgumentError("degenerate abscissae in linear fit");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

namespace {

// Series expansion of the regularized lower incomplete gamma P(a,x).
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) (Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw InvalidArgumentError("gamma_q domain: a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double stat, int dof) {
    if (dof < 1) throw InvalidArgumentError("chi-square needs dof >= 1");
    return gamma_q(0.5 * dof, 0.5 * stat);
}

double poisson_gof_pvalue(const std::vector<std::size_t>& counts, double mean) {
    if (counts.size() < 10) throw InvalidArgumentError("too few replications for a GOF test");
    const double n = static_cast<double>(counts.size());
    const std::size_t max_count = *std::max_element(counts.begin(), counts.end());

    // Observed histogram over 0..max_count.
    std::vector<double> observed(max_count + 1, 0.0);
    for (std::size_t c : counts) observed[c] += 1.0;

    // Poisson cell probabilities, final cell absorbs the upper tail.
    std::vector<double> expected(max_count + 1, 0.0);
    double p = std::exp(-mean);
    double cum = 0.0;
    for (std::size_t k = 0; k <= max_count; ++k) {
        if (k > 0) p *= mean / static_cast<double>(k);
        expected[k] = n * p;
        cum += p;
    }
    expected[max_count] += n * (1.0 - cum);

    // Merge cells with expected < 5 into the running neighbor.
    std::vector<double> obs_m, exp_m;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t k = 0; k <= max_count; ++k) {
        o_acc += observed[k];
        e_acc += expected[k];
        if (e_acc >= 5.0) {
            obs_m.push_back(o_acc);
            exp_m.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0) {
        if (exp_m.empty()) {
            obs_m.push_back(o_acc);
            exp_m.push_back(e_acc);
        } else {
            obs_m.back() += o_acc;
            exp_m.back() += e_acc;
        }
    }
    if (exp_m.size() < 2) return 1.0;  // everything in one cell: nothing to test

    double stat = 0.0;
    for (std::size_t i = 0; i < exp_m.size(); ++i) {
        const double d = obs_m[i] - exp_m[i];
        stat += d * d / exp_m[i];
    }
    return chi_square_sf(stat, static_cast<int>(exp_m.size()) - 1);
}

double ks_exponential_pvalue(std::vector<double> samples, double rate) {
    if (samples.size() < 10) throw InvalidArgumentError("too few samples for a KS test");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d_stat = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = 1.0 - std::exp(-rate * samples[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d_stat = std::max({d_stat, std::abs(cdf - lo), std::abs(hi - cdf)});
    }
    // Kolmogorov asymptotic with the Stephens small-sample correction.
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d_stat;
    double p = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * std::pow(-1.0, j - 1) * std::exp(-2.0 * j * j * lambda * lambda);
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace pmld::stats
