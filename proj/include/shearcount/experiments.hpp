#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shearcount/lattice.hpp"

namespace shearcount {

// Moments of R_T(Z^d u g) over shears u drawn from U_{d,l}(Z)\U_{d,l}(R).
struct MeanSquareEstimate {
  double T = 0.0;
  int samples = 0;
  double mean = 0.0;
  double mean_square = 0.0;
  double std_error = 0.0;       // of mean_square
  double mean_std_error = 0.0;  // of mean
  double bound_ratio = 0.0;     // mean_square / (T^{d-1} log^2 max(T, e))
  int family_d = 0;
  int family_l = 1;
};

// Sample i uses its own mt19937_64 seeded from (seed, i), so results are
// reproducible and independent of the thread count. Each shear is reused
// across all radii. With strict = true, l >= 2 requires d >= 4 and l <= d/2
// (FamilyOutOfRange otherwise).
std::vector<MeanSquareEstimate> shear_mean_square(const LatticeBasis& g, int l,
                                                  std::span<const double> Ts, int N,
                                                  std::uint64_t seed, bool strict = true,
                                                  unsigned threads = 1);

// The shear used for sample `index`.
ShearParameter sample_shear(int d, int l, std::uint64_t seed, std::uint64_t index);

enum class AverageRule { monte_carlo, grid };

struct ShearAverage {
  double T = 0.0;
  int samples = 0;
  double average = 0.0;
  double std_error = 0.0;
  // lambda_1^{d-1} c_{d-1}(g)/(d-1) times the sum2int error at T/lambda_1, k = d-1.
  double prediction = 0.0;
  // prediction plus the torus averages of the lower pieces c_j H^{(j)}, j <= d-2.
  // This is the exact average over the full shear group.
  double prediction_exact = 0.0;
};

double shear_average_prediction(const IwasawaChain& chain, double T);
double shear_average_prediction_exact(const IwasawaChain& chain, double T);

// Average of R_T over the full shear group (l = 1). The grid rule needs d = 2
// and places the N shears at midpoints (i + 1/2)/N.
std::vector<ShearAverage> shear_average(const LatticeBasis& g, std::span<const double> Ts, int N,
                                        std::uint64_t seed,
                                        AverageRule rule = AverageRule::monte_carlo,
                                        unsigned threads = 1);

// Shear averages at T = floor(T0) + (i + 1/2)/steps and the largest
// |average| / T^{(d-1)/2} found.
struct SharpnessScan {
  std::vector<ShearAverage> rows;
  double witness_T = 0.0;
  double witness_ratio = 0.0;
};
SharpnessScan sharpness_scan(const LatticeBasis& g, double T0, int steps, int N,
                             std::uint64_t seed, unsigned threads = 1);

// shear_mean_square with l = 1 at each diagonal lattice diag(a), a from
// `diagonals`. Throws NotUnimodular unless each product is 1 within 1e-12.
struct CompactEstimate {
  std::vector<std::vector<double>> diagonals;
  std::vector<std::vector<MeanSquareEstimate>> per_slice;
  std::vector<double> max_bound_ratio;  // per radius, over slices
};
CompactEstimate compact_set_mean_square(int d, const std::vector<std::vector<double>>& diagonals,
                                        std::span<const double> Ts, int N, std::uint64_t seed,
                                        unsigned threads = 1);

// Least-squares line through (log T, log mean_square).
struct ExponentFit {
  std::vector<std::pair<double, double>> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
// Throws InsufficientPoints for fewer than 4 distinct radii.
ExponentFit growth_fit(std::span<const double> Ts, std::span<const double> values);
ExponentFit growth_fit(const std::vector<MeanSquareEstimate>& estimates);

// n radii geometrically spaced on [a, b]; with `golden`, radius i is moved
// up by the fractional part of (i + 1) times the golden ratio conjugate,
// scaled by `jitter`, to keep away from integer and rational radii.
std::vector<double> radius_grid(double a, double b, int n, bool golden = true,
                                double jitter = 0.5);

// T^{d-1} log^2 max(T, e).
double bound_scale(int d, double T);

}  // namespace shearcount
