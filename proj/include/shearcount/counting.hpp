#pragma once

#include <cstdint>

#include "shearcount/enumeration.hpp"
#include "shearcount/lattice.hpp"

namespace shearcount {

// N_T = #{n : |n g| < T}, main term vol(B_T)/covol, remainder N_T - main.
struct CountResult {
  double radius = 0.0;
  std::uint64_t count = 0;
  double main_term = 0.0;
  double remainder = 0.0;
  double covolume = 0.0;
  // Some |n g| fell within 1e-9 T of T; the count is exact for the
  // floating-point norms but the caller may want to perturb T.
  bool boundary_hit = false;
};

// A finite sum over the lattice points of the open ball.
struct LatticeSum {
  double value = 0.0;
  std::uint64_t terms = 0;
  bool boundary_hit = false;
};

// pi^{d/2} T^d / Gamma(d/2 + 1).
double ball_volume(int d, double T);

CountResult count_points(const LatticeBasis& g, double T, unsigned threads = 1);
CountResult count_points(const TriangularForm& tri, double covolume, double T,
                         unsigned threads = 1);

// P_T = sum_{|n g| < T} sqrt(T^2 - |n g|^2).
LatticeSum p_sum(const LatticeBasis& g, double T, unsigned threads = 1);
LatticeSum p_sum(const TriangularForm& tri, double T, unsigned threads = 1);

// sum_{|n g| < T} (T^2 - |n g|^2)^{k/2}, k >= 0.
LatticeSum smoothed_sum(const LatticeBasis& g, double T, int k, unsigned threads = 1);
LatticeSum smoothed_sum(const TriangularForm& tri, double T, int k, unsigned threads = 1);

// c_{k,d} = 2 pi^{d/2}/Gamma(d/2) int_0^1 (1-r^2)^{k/2} r^{d-1} dr
//         = pi^{d/2} Gamma(k/2 + 1) / Gamma((k+d)/2 + 1).
double poisson_constant(int k, int d);

// c_{k,d} T^{k+d} / covol.
double poisson_main_term(const LatticeBasis& g, double T, int k);

// (T^2 - r2)^{k/2} for r2 < T^2.
inline double radial_power(double t2_minus_r2, int k) {
  double base = 1.0;
  for (int i = 0; i < k / 2; ++i) base *= t2_minus_r2;
  return (k % 2 == 0) ? base : base * std::sqrt(t2_minus_r2);
}

}  // namespace shearcount
