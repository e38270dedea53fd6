#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <algorithm>
#include <vector>

#include "shearcount/lattice.hpp"

namespace testing {

// Entries uniform in [-2, 2], det > 0 and not too small so brute force stays cheap.
inline shearcount::LatticeBasis random_basis(int d, std::mt19937_64& rng, double min_det = 0.2) {
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  for (;;) {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = entry(rng);
    const double det = m.determinant();
    if (std::abs(det) < min_det) continue;
    if (det < 0) m.row(0) = -m.row(0);
    return shearcount::make_lattice(m);
  }
}

inline Eigen::MatrixXd random_rotation(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

// Product of random elementary integer matrices.
inline Eigen::MatrixXd random_unimodular(int d, std::mt19937_64& rng) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(d, d);
  std::uniform_int_distribution<int> idx(0, d - 1);
  std::uniform_int_distribution<int> mult(-1, 1);
  for (int step = 0; step < 3 * d; ++step) {
    const int i = idx(rng);
    const int j = idx(rng);
    if (i == j) continue;
    g.row(i) += mult(rng) * g.row(j);
  }
  return g;
}

// Visits every n in the box |n_i| <= bound_i with |n g| < T.
inline void brute_force(const shearcount::LatticeBasis& g, double T,
                        const std::function<void(const Eigen::VectorXd&, double)>& visit) {
  const int d = g.dim();
  const Eigen::MatrixXd inv = g.rows().inverse();
  std::vector<long long> bound(d);
  for (int i = 0; i < d; ++i) bound[i] = static_cast<long long>(std::ceil(T * inv.col(i).norm())) + 1;
  std::vector<long long> n(d);
  for (int i = 0; i < d; ++i) n[i] = -bound[i];
  for (;;) {
    Eigen::VectorXd nv(d);
    for (int i = 0; i < d; ++i) nv[i] = static_cast<double>(n[i]);
    const Eigen::VectorXd v = g.rows().transpose() * nv;
    const double norm2 = v.squaredNorm();
    if (norm2 < T * T) visit(nv, norm2);
    int i = d - 1;
    while (i >= 0 && n[i] == bound[i]) {
      n[i] = -bound[i];
      --i;
    }
    if (i < 0) break;
    ++n[i];
  }
}

inline std::uint64_t brute_count(const shearcount::LatticeBasis& g, double T) {
  std::uint64_t c = 0;
  brute_force(g, T, [&](const Eigen::VectorXd&, double) { ++c; });
  return c;
}

// Box size of brute_force, to skip cases that would take too long.
inline double brute_box(const shearcount::LatticeBasis& g, double T) {
  const Eigen::MatrixXd inv = g.rows().inverse();
  double size = 1.0;
  for (int i = 0; i < g.dim(); ++i) size *= 2.0 * (std::ceil(T * inv.col(i).norm()) + 1) + 1;
  return size;
}

}  // namespace testing

namespace testing {

// Adaptive Simpson, kept separate from the library's Gauss-Legendre code so
// it can serve as an oracle.
// Subdivides at least `min_depth` times before trusting the error estimate,
// which guards against early agreement on symmetric integrands.
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth,
                           int min_depth = 4) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || (min_depth <= 0 && std::abs(delta) <= 15.0 * tol)) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, min_depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, min_depth - 1);
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-13, int depth = 40) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Simpson over consecutive break points (for piecewise smooth integrands).
inline double simpson_pieces(const std::function<double(double)>& f, std::vector<double> breaks,
                             double tol = 1e-13) {
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += simpson(f, breaks[i], breaks[i + 1], tol / static_cast<double>(breaks.size()));
  }
  return total;
}

}  // namespace testing
