#include "shearcount/special_functions.hpp"

#include <quadmath.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "shearcount/errors.hpp"
#include "shearcount/quadrature.hpp"

namespace shearcount {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kSeriesLimit = 20.0;

// Summed in binary128: near x = 20 the terms reach 1e8 times the result and
// long double would leave errors around 1e-11.
long double bessel_series(double nu, double x) {
  const __float128 half = 0.5 * static_cast<__float128>(x);
  const __float128 q = half * half;
  __float128 term = static_cast<__float128>(std::pow(0.5L * x, static_cast<long double>(nu)) /
                                            gamma_function(nu + 1.0));
  __float128 sum = term;
  __float128 largest = fabsq(term);
  for (int k = 1; k < 500; ++k) {
    term *= -q / (static_cast<__float128>(k) * (k + static_cast<__float128>(nu)));
    sum += term;
    largest = std::max(largest, fabsq(term));
    if (fabsq(term) <= 1e-32 * largest && k > half) break;
  }
  return static_cast<long double>(sum);
}

// Hankel expansion; terms are dropped once they stop decreasing.
double bessel_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(a) > prev) break;
    prev = std::abs(a);
    switch (k % 4) {
      case 1: q += a; break;
      case 2: p -= a; break;
      case 3: q -= a; break;
      default: p += a; break;
    }
    if (std::abs(a) < 1e-17) break;
  }
  const double phase = (0.5 * nu + 0.25) * kPi;
  const double c = std::cos(x) * std::cos(phase) + std::sin(x) * std::sin(phase);
  const double s = std::sin(x) * std::cos(phase) - std::cos(x) * std::sin(phase);
  return std::sqrt(2.0 / (kPi * x)) * (p * c - q * s);
}

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// (X^2 - u^2)^{(k-2)/2} * w(u) du over [0, X] after u = X sin(theta); `inner`
// receives u and returns w(u).
template <class Inner>
double theta_quadrature(int k, double X, double abs_tol, const Inner& inner) {
  const auto& rule = quad::gauss_legendre(16);
  auto f = [&](double theta) {
    const double c = std::cos(theta);
    const double u = X * std::sin(theta);
    return std::pow(X, k - 1) * std::pow(c, k - 1) * inner(u);
  };
  const int pieces = std::max(4, static_cast<int>(std::ceil(2.0 * X)));
  std::vector<double> breaks;
  breaks.reserve(pieces + 1);
  breaks.push_back(0.0);
  for (int i = 1; i < pieces; ++i) {
    breaks.push_back(std::asin(static_cast<double>(i) / pieces));
  }
  breaks.push_back(0.5 * kPi);
  return quad::adaptive_panels(f, breaks, abs_tol, rule);
}

double osc_tolerance(double nu, int k, double X) {
  return 1e-10 * (1.0 + std::pow(X, 0.5 * (k + 2.0 * nu - 1.0)));
}

// sin/cos of 2 pi X with the integer part of X removed first.
double sin_2pi(double X) { return std::sin(2.0 * kPi * (X - std::floor(X))); }
double cos_2pi(double X) { return std::cos(2.0 * kPi * (X - std::floor(X))); }

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

// Exact I_k for even k: p(u) = u (X^2 - u^2)^m, m = k/2 - 1, and
//   int p sin(au) = sum_i (-1)^i p^{(i)}(u) sigma_i(u)
// with sigma_i the (i+1)-fold antiderivative of sin(au).
double osc_integral_I_even(int k, double X) {
  const int m = k / 2 - 1;
  const int degree = 2 * m + 1;
  const double a = 2.0 * kPi;

  // Taylor coefficients of p at u = 0.
  std::vector<double> at_zero(degree + 1, 0.0);
  for (int r = 0; r <= m; ++r) {
    at_zero[2 * r + 1] = binomial(m, r) * std::pow(X, 2 * (m - r)) * ((r % 2) ? -1.0 : 1.0);
  }
  // Taylor coefficients in v = X - u of (X - v) v^m (2X - v)^m.
  std::vector<double> at_end(degree + 1, 0.0);
  for (int r = 0; r <= m; ++r) {
    const double c = binomial(m, r) * std::pow(2.0 * X, m - r) * ((r % 2) ? -1.0 : 1.0);
    at_end[m + r] += c * X;
    at_end[m + r + 1] -= c;
  }

  const double cx = cos_2pi(X);
  const double sx = sin_2pi(X);
  auto sigma = [&](int i, double c, double s) {
    const double scale = 1.0 / std::pow(a, i + 1);
    switch (i % 4) {
      case 0: return -c * scale;
      case 1: return -s * scale;
      case 2: return c * scale;
      default: return s * scale;
    }
  };
  double upper = 0.0;
  double lower = 0.0;
  double factorial = 1.0;
  for (int i = 0; i <= degree; ++i) {
    if (i > 0) factorial *= i;
    const double sign = (i % 2) ? -1.0 : 1.0;
    const double d_end = sign * factorial * at_end[i];  // d/du = -d/dv
    const double d_zero = factorial * at_zero[i];
    upper += sign * d_end * sigma(i, cx, sx);
    lower += sign * d_zero * sigma(i, 1.0, 0.0);
  }
  return upper - lower;
}

__float128 powq_int(__float128 base, int e) {
  __float128 r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// int_0^1 (1 - t^2)^{k/2} dt by the Wallis recursion, in binary128.
__float128 unit_moment_q(int k) {
  __float128 value = (k % 2 == 0) ? static_cast<__float128>(1) : atanq(static_cast<__float128>(1));
  for (int j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) {
    value = value * j / (j + 1);
  }
  return value;
}

}  // namespace

double gamma_function(double x) {
  if (x < 0.5) {
    return kPi / (std::sin(kPi * x) * gamma_function(1.0 - x));
  }
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  const double root = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * kPi) * root * (root * std::exp(-t)) * acc;
}

double beta_function(double a, double b) { return gamma_function(a) * gamma_function(b) / gamma_function(a + b); }

double unit_moment(int k) {
  require(k >= 0, "unit_moment: k must be >= 0");
  return 0.5 * beta_function(0.5, 0.5 * k + 1.0);
}

double bessel_j(double nu, double x) {
  require(nu >= 0.0, "bessel_j: order must be >= 0");
  require(x >= 0.0, "bessel_j: argument must be >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x < kSeriesLimit) return static_cast<double>(bessel_series(nu, x));
  if (nu < 2.0) return bessel_hankel(nu, x);
  if (nu >= x) return static_cast<double>(bessel_series(nu, x));
  const double base = nu - std::floor(nu);
  double prev = bessel_hankel(base, x);
  double curr = bessel_hankel(base + 1.0, x);
  for (double order = base + 1.0; order + 0.5 < nu; order += 1.0) {
    const double next = 2.0 * order / x * curr - prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

double bessel_j_leading(double nu, double x) {
  return std::sqrt(2.0 / (kPi * x)) * std::cos(x - kPi * (2.0 * nu + 1.0) / 4.0);
}

void validate(const OscIntegralSpec& spec) {
  require(spec.nu >= 0.0, "oscillatory integral: nu must be >= 0");
  require(spec.k >= 1, "oscillatory integral: k must be >= 1");
  require(spec.X >= 0.0, "oscillatory integral: X must be >= 0");
}

double osc_integral_J(double nu, int k, double X) {
  validate({nu, k, X});
  if (X == 0.0) return 0.0;
  return theta_quadrature(k, X, osc_tolerance(nu, k, X), [nu](double u) {
    return bessel_j(nu, 2.0 * kPi * u) * std::pow(u, nu + 1.0);
  });
}

double osc_integral_J(const OscIntegralSpec& spec) {
  return osc_integral_J(spec.nu, spec.k, spec.X);
}

double osc_integral_J_bessel(double nu, int k, double X) {
  validate({nu, k, X});
  if (X == 0.0) return 0.0;
  const double half_k = 0.5 * k;
  return gamma_function(half_k) / (2.0 * std::pow(kPi, half_k)) * std::pow(X, nu + half_k) *
         bessel_j(nu + half_k, 2.0 * kPi * X);
}

double osc_integral_I(int k, double X) {
  validate({0.5, k, X});
  if (X == 0.0) return 0.0;
  if (k % 2 == 0) return osc_integral_I_even(k, X);
  return theta_quadrature(k, X, kPi * osc_tolerance(0.5, k, X),
                          [](double u) { return u * std::sin(2.0 * kPi * u); });
}

double osc_integral_I_bessel(int k, double X) {
  return kPi * osc_integral_J_bessel(0.5, k, X);
}

Sum2IntResult sum2int_1d(double T, int k) {
  require(T > 0.0, "sum2int_1d: T must be > 0");
  require(k >= 0, "sum2int_1d: k must be >= 0");
  const auto last = static_cast<long long>(std::ceil(T)) - 1;  // |n| < T
  const __float128 t = T;
  const __float128 t2 = t * t;
  auto term = [k](__float128 base) {
    if (k % 2 == 0) return powq_int(base, k / 2);
    return sqrtq(base) * powq_int(base, k / 2);
  };
  __float128 sum = term(t2);
  for (long long n = 1; n <= last; ++n) {
    const __float128 nq = static_cast<__float128>(n);
    sum += 2 * term(t2 - nq * nq);
  }
  const __float128 main = 2 * powq_int(t, k + 1) * unit_moment_q(k);
  return {static_cast<double>(sum), static_cast<double>(main),
          static_cast<double>(sum - main)};
}

double closed_form_k2(double T) {
  require(T > 0.0, "closed_form_k2: T must be > 0");
  const double f = T - std::floor(T);
  return 4.0 / 3.0 * T * T * T - (2.0 * f * f - 2.0 * f + 1.0 / 3.0) * T +
         (2.0 / 3.0 * f * f * f - f * f + f / 3.0);
}

}  // namespace shearcount
