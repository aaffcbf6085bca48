#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace pmld::stats {

// (mean, standard error of the mean).
std::pair<double, double> mean_stderr(const std::vector<double>& xs);

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
};

// Least squares y = intercept + slope * x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Regularized upper incomplete gamma Q(a,x) (series/continued fraction).
double gamma_q(double a, double x);

// Chi-square survival function with k degrees of freedom.
double chi_square_sf(double stat, int dof);

// Goodness-of-fit p-value for iid counts against Poisson(mean); bins with
// expected count below 5 are merged into their neighbor.
double poisson_gof_pvalue(const std::vector<std::size_t>& counts, double mean);

// Kolmogorov-Smirnov p-value for samples against Exponential(rate).
double ks_exponential_pvalue(std::vector<double> samples, double rate);

}  // namespace pmld::stats
