#pragma once

// Scalar special functions used by the rectenna model: the principal branch
// of the Lambert-W function and the modified Bessel functions I0 and I1.
//
// All functions take nonnegative real arguments and throw std::domain_error
// otherwise. The *_log variants stay finite for arguments where the plain
// value would overflow a double (I0 overflows near x = 713).

namespace wpt::specfun {

// Above this argument the Bessel functions switch from the power series to
// the large-argument expansion, and composites go through the log domain.
inline constexpr double kLargeArgument = 30.0;

// W0(u) for u >= 0, i.e. the w >= 0 with w * exp(w) = u.
double lambert_w0(double u);

// W0(exp(log_u)). Solves w + ln(w) = log_u directly for large log_u, so u
// itself never has to be formed.
double lambert_w0_from_log(double log_u);

double bessel_i0(double x);
double bessel_i0_log(double x);

double bessel_i1(double x);
// ln I1(x); -infinity at x = 0.
double bessel_i1_log(double x);

// I1(x) / (x * I0(x)), continuous at x = 0 where it equals 1/2.
double bessel_i1_over_x_i0(double x);

}  // namespace wpt::specfun
