#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "shearcount/counting.hpp"
#include "shearcount/enumeration.hpp"
#include "shearcount/lattice.hpp"

namespace shearcount {

// s(t) = 1/2 - {t}; s(n) = 1/2 at integers.
inline double sawtooth(double t) { return 0.5 - (t - std::floor(t)); }

// H_T^{(j)}(g, lambda, x) for a (d-1)-dimensional base lattice g.
struct OscSumQuery {
  LatticeBasis base;
  double lambda = 1.0;
  Eigen::VectorXd x;
  double radius = 1.0;
  int smooth_order = 0;
};

// Throws DomainError/DimMismatch unless lambda > 0, T > 0, j >= 0 and
// x has the base dimension.
void validate(const OscSumQuery& q);

// How H^{(j)}, j >= 1, integrates the sawtooth against (T^2-t^2)^{(j-2)/2} t.
//   closed_form      each point's integral summed exactly: with R^2 = T^2 - |ng|^2
//                    and y = n.x it equals
//                    (1/j) [ sum_k (R^2 - lambda^2 (k+y)^2)_+^{j/2}
//                            - 2 R^{j+1} int_0^1 (1-t^2)^{j/2} dt / lambda ]
//   piecewise_gauss  Gauss-Legendre on every linearity interval of the two
//                    sawtooth terms, after u = R sin(theta)
enum class SmoothingRoute { closed_form, piecewise_gauss };

struct SmoothingOptions {
  SmoothingRoute route = SmoothingRoute::closed_form;
  int gauss_order = 32;
};

// Evaluates H^{(j)} at every x in `xs` with a single enumeration of the base
// lattice. `tri` is the triangular form of the base.
struct HValues {
  std::vector<double> values;
  std::uint64_t terms = 0;
  bool boundary_hit = false;
};
HValues h_values(const TriangularForm& tri, double lambda, double T, int j,
                 const std::vector<Eigen::VectorXd>& xs, SmoothingOptions opts = {},
                 unsigned threads = 1);

// H_T (j = 0): sum over |n g| < T of s(R/lambda - n.x) + s(R/lambda + n.x).
LatticeSum h_sum(const OscSumQuery& q, unsigned threads = 1);

// (2/pi) sum_{m<=M} (1/m) sum_n sin(2 pi m R/lambda) cos(2 pi m n.x).
double h_sum_series(const OscSumQuery& q, int M);

// H_T^{(j)}, j >= 1.
LatticeSum h_smoothed(const OscSumQuery& q, SmoothingOptions opts = {}, unsigned threads = 1);

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the omitted m > M terms
};

// (2 lambda^j/pi) sum_{m<=M} m^{-1-j} sum_n I_j((m/lambda) R) cos(2 pi m n.x),
// I_j through its Bessel closed form.
SeriesValue h_smoothed_series(const OscSumQuery& q, int M);

// sup_{X>0} |I_j(X)| / X^{j/2}, measured on a fine grid of X in (0, 60]
// (the ratio is maximal well inside this range for j <= 8) and padded by 5%.
double osc_integral_I_growth_constant(int j);

// Torus average of H^{(j)} over x from the n = 0 term alone:
//   j = 0:  1 - 2{T/lambda}
//   j >= 1: (lambda^j/j) * (sum_{|k|<T/lambda} ((T/lambda)^2-k^2)^{j/2}
//                           - 2 (T/lambda)^{j+1} int_0^1 (1-t^2)^{j/2} dt)
double h_average_exact(double lambda, double T, int j);

// Midpoint tensor grid with `per_dim` nodes per coordinate of x.
std::vector<Eigen::VectorXd> torus_grid(int dim, int per_dim);
// `count` i.i.d. uniform points of [0,1)^dim from mt19937_64(seed).
std::vector<Eigen::VectorXd> torus_samples(int dim, int count, std::uint64_t seed);

// j = 0: the exact average. j >= 1: tensor-grid quadrature of h_smoothed.
double h_average(const LatticeBasis& base, double lambda, double T, int j, int per_dim = 16,
                 unsigned threads = 1);

struct TorusEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

enum class TorusRule { grid, monte_carlo };

struct MeanSquareOptions {
  TorusRule rule = TorusRule::grid;
  int per_dim = 64;        // grid
  int samples = 1000;      // Monte-Carlo
  std::uint64_t seed = 0;  // Monte-Carlo
};

// Estimate of int |H^{(j)}|^2 dx. std_error is the sample standard error of
// the squared values (nominal for grids).
TorusEstimate h_mean_square(const LatticeBasis& base, double lambda, double T, int j,
                            MeanSquareOptions opts = {}, unsigned threads = 1);
// Grid or Monte-Carlo average of H^{(j)} itself, same conventions.
TorusEstimate h_torus_mean(const LatticeBasis& base, double lambda, double T, int j,
                           MeanSquareOptions opts = {}, unsigned threads = 1);

}  // namespace shearcount
