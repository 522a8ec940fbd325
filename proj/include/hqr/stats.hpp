#pragma once

#include <vector>

namespace hqr::stats {

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Chi-square distribution with df degrees of freedom.
double chisq_cdf(double x, double df);
double chisq_upper_tail(double x, double df);
double chisq_quantile(double p, double df);

// Linear-interpolation quantile of a sorted sample (R type 7).
double quantile_sorted(const std::vector<double>& sorted, double p);

// Order-statistic quantile of a sorted sample: the ceil(p*m)-th value.
// Used for Monte Carlo critical values.
double order_statistic_quantile(const std::vector<double>& sorted, double p);

double median(std::vector<double> values);

}  // namespace hqr::stats
