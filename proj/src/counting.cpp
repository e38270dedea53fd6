#include "shearcount/counting.hpp"

#include <cmath>
#include <numbers>

#include "shearcount/errors.hpp"
#include "shearcount/special_functions.hpp"

namespace shearcount {

namespace {

void require_radius(double T) {
  if (!(T > 0.0)) throw DomainError("radius must be > 0");
}

struct PowerSum {
  double t2 = 0.0;
  int k = 0;
  double sum = 0.0;
  std::uint64_t terms = 0;
  void operator()(std::span<const long long>, double norm2) {
    sum += radial_power(t2 - norm2, k);
    ++terms;
  }
  void merge(const PowerSum& other) {
    sum += other.sum;
    terms += other.terms;
  }
};

}  // namespace

double ball_volume(int d, double T) {
  if (d < 1) throw DomainError("ball_volume: d must be >= 1");
  if (T < 0.0) throw DomainError("ball_volume: T must be >= 0");
  return std::pow(std::numbers::pi, 0.5 * d) * std::pow(T, d) / gamma_function(0.5 * d + 1.0);
}

CountResult count_points(const TriangularForm& tri, double covolume, double T, unsigned threads) {
  require_radius(T);
  const CountTally tally = count_points_raw(tri, T, threads);
  CountResult out;
  out.radius = T;
  out.count = tally.count;
  out.covolume = covolume;
  out.main_term = ball_volume(tri.dim, T) / covolume;
  out.remainder = static_cast<double>(tally.count) - out.main_term;
  out.boundary_hit = tally.boundary_hit;
  return out;
}

CountResult count_points(const LatticeBasis& g, double T, unsigned threads) {
  return count_points(triangular_form(g), g.covolume(), T, threads);
}

LatticeSum smoothed_sum(const TriangularForm& tri, double T, int k, unsigned threads) {
  require_radius(T);
  if (k < 0) throw DomainError("smoothed_sum: k must be >= 0");
  const auto folded = fold_points(tri, T, PowerSum{T * T, k}, threads);
  return {folded.value.sum, folded.value.terms, folded.boundary_hit};
}

LatticeSum smoothed_sum(const LatticeBasis& g, double T, int k, unsigned threads) {
  return smoothed_sum(triangular_form(g), T, k, threads);
}

LatticeSum p_sum(const TriangularForm& tri, double T, unsigned threads) {
  return smoothed_sum(tri, T, 1, threads);
}

LatticeSum p_sum(const LatticeBasis& g, double T, unsigned threads) {
  return smoothed_sum(g, T, 1, threads);
}

double poisson_constant(int k, int d) {
  if (k < 0 || d < 1) throw DomainError("poisson_constant: need k >= 0, d >= 1");
  return std::pow(std::numbers::pi, 0.5 * d) * gamma_function(0.5 * k + 1.0) /
         gamma_function(0.5 * (k + d) + 1.0);
}

double poisson_main_term(const LatticeBasis& g, double T, int k) {
  return poisson_constant(k, g.dim()) * std::pow(T, k + g.dim()) / g.covolume();
}

}  // namespace shearcount
