#pragma once

// Gamma/Beta, Bessel J_nu, the Bessel and sine weighted oscillatory
// integrals, and the one-dimensional smoothed sums
//   sum_{|n|<T} (T^2 - n^2)^{k/2}.

namespace shearcount {

// Lanczos approximation (g = 7, 9 terms), reflection below 1/2.
double gamma_function(double x);
double beta_function(double a, double b);

// int_0^1 (1 - t^2)^{k/2} dt = B(1/2, k/2 + 1) / 2, for k >= 0.
double unit_moment(int k);

// J_nu(x) for nu >= 0, x >= 0.
//   x < 20            power series in extended precision
//   x >= 20, nu < 2   Hankel asymptotic expansion, truncated at its
//                     smallest term
//   x >= 20, nu >= 2  Hankel at the fractional orders, then forward
//                     recurrence (stable while nu < x); series otherwise
// Throws DomainError for negative arguments.
double bessel_j(double nu, double x);

// Leading term of the Hankel expansion, sqrt(2/(pi x)) cos(x - pi(2nu+1)/4).
double bessel_j_leading(double nu, double x);

struct OscIntegralSpec {
  double nu = 0.5;
  int k = 1;
  double X = 0.0;
};

// Throws DomainError unless nu >= 0, k >= 1, X >= 0.
void validate(const OscIntegralSpec& spec);

// J_{nu,k}(X) = int_0^X (X^2 - u^2)^{(k-2)/2} J_nu(2 pi u) u^{nu+1} du by
// panel quadrature after u = X sin(theta). Panels follow the half-periods of
// J_nu(2 pi u); each is Gauss-Legendre 16 with adaptive bisection.
double osc_integral_J(double nu, int k, double X);
double osc_integral_J(const OscIntegralSpec& spec);

// The same integral through Sonine's first finite integral,
//   J_{nu,k}(X) = Gamma(k/2) / (2 pi^{k/2}) X^{nu+k/2} J_{nu+k/2}(2 pi X).
double osc_integral_J_bessel(double nu, int k, double X);

// I_k(X) = int_0^X (X^2 - u^2)^{(k-2)/2} u sin(2 pi u) du.
// Even k: exact antiderivative from repeated integration by parts.
// Odd k: the panel quadrature used for J_{nu,k}.
double osc_integral_I(int k, double X);

// I_k(X) = pi J_{1/2,k}(X) evaluated with osc_integral_J_bessel.
double osc_integral_I_bessel(int k, double X);

struct Sum2IntResult {
  double sum = 0.0;
  double main = 0.0;
  double error = 0.0;  // sum - main, formed before rounding to double
};

// sum_{|n|<T} (T^2 - n^2)^{k/2} against 2 T^{k+1} int_0^1 (1-t^2)^{k/2} dt.
// Accumulated in binary128 so the error stays resolvable for T up to 1e5
// and k <= 8. k = 0 gives the plain count against 2T.
Sum2IntResult sum2int_1d(double T, int k);

// 4/3 T^3 - (2f^2 - 2f + 1/3) T + (2/3 f^3 - f^2 + f/3), f = {T}.
double closed_form_k2(double T);

}  // namespace shearcount
