#include "wpt/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wpt::specfun {
namespace {

constexpr double kSeriesRelTol = 1e-17;
constexpr double kStepTol = 1e-14;
constexpr int kMaxHalley = 64;

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw std::domain_error(std::string(what) + ": argument must be nonnegative");
  }
}

// sum_k (x/2)^(2k+order) / (k! (k+order)!), order in {0, 1}.
double bessel_series(double x, int order) {
  const double q = 0.25 * x * x;
  double term = order == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
    sum += term;
    if (term < kSeriesRelTol * sum) break;
  }
  return sum;
}

// ln of sum_k (-1)^k a_k(order) / x^k, the bracket in
// I_order(x) ~ exp(x) / sqrt(2 pi x) * [...].
double log_asymptotic_bracket(double x, int order) {
  const double four_nu_sq = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  double prev_abs = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(four_nu_sq - odd * odd) / (8.0 * k * x);
    const double abs_term = std::abs(term);
    if (abs_term > prev_abs) break;  // series turned divergent
    sum += term;
    prev_abs = abs_term;
    if (abs_term < kSeriesRelTol * std::abs(sum)) break;
  }
  return std::log(sum);
}

double log_large(double x, int order) {
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + log_asymptotic_bracket(x, order);
}

double halley_w0(double u, double w) {
  for (int it = 0; it < kMaxHalley; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - u;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= kStepTol * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace

double lambert_w0(double u) {
  require_nonnegative(u, "lambert_w0");
  if (u == 0.0) return 0.0;
  if (std::isinf(u)) return u;
  if (u > 1e100) return lambert_w0_from_log(std::log(u));

  double guess;
  if (u < 0.25) {
    guess = u * (1.0 - u + 1.5 * u * u);
  } else if (u <= std::numbers::e) {
    const double l = std::log1p(u);
    guess = l * (1.0 - std::log1p(l) / (2.0 + l));
  } else {
    const double l = std::log(u);
    guess = l - std::log(l);
  }
  return halley_w0(u, guess);
}

double lambert_w0_from_log(double log_u) {
  if (std::isnan(log_u)) throw std::domain_error("lambert_w0_from_log: NaN argument");
  if (log_u < 2.0) return lambert_w0(std::exp(log_u));

  // f(w) = w + ln w - L, f' = 1 + 1/w, f'' = -1/w^2.
  double w = log_u - std::log(log_u);
  for (int it = 0; it < kMaxHalley; ++it) {
    const double f = w + std::log(w) - log_u;
    const double d1 = 1.0 + 1.0 / w;
    const double d2 = -1.0 / (w * w);
    const double step = 2.0 * f * d1 / (2.0 * d1 * d1 - f * d2);
    w -= step;
    if (std::abs(step) <= kStepTol * (1.0 + std::abs(w))) break;
  }
  return w;
}

double bessel_i0(double x) {
  require_nonnegative(x, "bessel_i0");
  if (x <= kLargeArgument) return bessel_series(x, 0);
  return std::exp(log_large(x, 0));
}

double bessel_i0_log(double x) {
  require_nonnegative(x, "bessel_i0_log");
  if (x <= kLargeArgument) return std::log(bessel_series(x, 0));
  return log_large(x, 0);
}

double bessel_i1(double x) {
  require_nonnegative(x, "bessel_i1");
  if (x <= kLargeArgument) return bessel_series(x, 1);
  return std::exp(log_large(x, 1));
}

double bessel_i1_log(double x) {
  require_nonnegative(x, "bessel_i1_log");
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x <= kLargeArgument) return std::log(bessel_series(x, 1));
  return log_large(x, 1);
}

double bessel_i1_over_x_i0(double x) {
  require_nonnegative(x, "bessel_i1_over_x_i0");
  if (x == 0.0) return 0.5;
  if (x <= kLargeArgument) {
    // I1(x)/x = 0.5 * sum_k (x^2/4)^k / (k! (k+1)!), no division by x.
    const double q = 0.25 * x * x;
    double term = 0.5;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
      term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
      sum += term;
      if (term < kSeriesRelTol * sum) break;
    }
    return sum / bessel_series(x, 0);
  }
  return std::exp(log_large(x, 1) - log_large(x, 0)) / x;
}

}  // namespace wpt::specfun
