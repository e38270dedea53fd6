#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace shearcount::quad {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rules are built by Newton iteration on P_n; orders 16 and 32 are built
// once and shared (immutable after construction).
const GaussLegendreRule& gauss_legendre(int order);

template <class F>
double gauss_panel(const F& f, double a, double b, const GaussLegendreRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

namespace detail {

template <class F>
double adaptive_step(const F& f, double a, double b, double whole, double tol,
                     double floor, const GaussLegendreRule& rule, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss_panel(f, a, m, rule);
  const double right = gauss_panel(f, m, b, rule);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= std::max(tol, floor)) return refined;
  return adaptive_step(f, a, m, left, 0.5 * tol, 0.5 * floor, rule, depth - 1) +
         adaptive_step(f, m, b, right, 0.5 * tol, 0.5 * floor, rule, depth - 1);
}

}  // namespace detail

// Adaptive bisection of one panel: accept when the Gauss value over the panel
// agrees with the sum over its two halves within `tol`, or within rounding
// of int |f| over the panel.
template <class F>
double adaptive_panel(const F& f, double a, double b, double tol,
                      const GaussLegendreRule& rule, int max_depth = 18) {
  if (a == b) return 0.0;
  const double whole = gauss_panel(f, a, b, rule);
  const double magnitude = gauss_panel([&f](double t) { return std::abs(f(t)); }, a, b, rule);
  const double floor = 1e-12 * std::abs(magnitude);  // rounding in f itself, e.g. Bessel values
  return detail::adaptive_step(f, a, b, whole, tol, floor, rule, max_depth);
}

// Integrates over consecutive panels [breaks[i], breaks[i+1]] with a shared
// absolute tolerance split evenly among panels.
template <class F>
double adaptive_panels(const F& f, std::span<const double> breaks, double tol,
                       const GaussLegendreRule& rule) {
  if (breaks.size() < 2) return 0.0;
  const double per_panel = tol / static_cast<double>(breaks.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += adaptive_panel(f, breaks[i], breaks[i + 1], per_panel, rule);
  }
  return total;
}

}  // namespace shearcount::quad
