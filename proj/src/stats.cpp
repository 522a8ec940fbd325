#include "hqr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hqr/errors.hpp"

namespace hqr::stats {

namespace {

// Series expansion of P(a,x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) (modified Lentz), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0) throw domain_error("gamma_p: shape must be positive");
  if (x < 0) throw domain_error("gamma_p: x must be nonnegative");
  if (x == 0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chisq_cdf(double x, double df) {
  if (df <= 0) throw domain_error("chisq_cdf: df must be positive");
  if (x <= 0) return 0.0;
  return gamma_p(df / 2.0, x / 2.0);
}

double chisq_upper_tail(double x, double df) {
  if (df <= 0) throw domain_error("chisq_upper_tail: df must be positive");
  if (x <= 0) return 1.0;
  if (x < df / 2.0 + 1.0) return 1.0 - gamma_p_series(df / 2.0, x / 2.0);
  return gamma_q_cf(df / 2.0, x / 2.0);
}

double chisq_quantile(double p, double df) {
  if (p < 0 || p >= 1) throw domain_error("chisq_quantile: p must be in [0,1)");
  if (p == 0) return 0.0;
  double lo = 0.0;
  double hi = df + 10.0;
  while (chisq_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (chisq_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw insufficient_data_error("quantile of empty sample");
  if (p <= 0) return sorted.front();
  if (p >= 1) return sorted.back();
  double pos = p * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

double order_statistic_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw insufficient_data_error("quantile of empty sample");
  auto m = sorted.size();
  auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(m)));
  k = std::min(std::max<std::size_t>(k, 1), m);
  return sorted[k - 1];
}

double median(std::vector<double> values) {
  if (values.empty()) throw insufficient_data_error("median of empty sample");
  std::sort(values.begin(), values.end());
  auto m = values.size();
  if (m % 2 == 1) return values[m / 2];
  return 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

}  // namespace hqr::stats
