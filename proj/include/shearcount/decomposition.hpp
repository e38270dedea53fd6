#pragma once

#include <vector>

#include "shearcount/lattice.hpp"
#include "shearcount/oscillatory_sums.hpp"

namespace shearcount {

// alpha_k = int_0^1 (1-u^2)^{(k-3)/2} u^2 du = B(3/2, (k-1)/2)/2, k >= 2.
double alpha_k(int k);

// c_k(g) in closed form, 1 <= k <= d-1:
//   vol(B^d) |det g^{(d-k)}| / (vol(B^{d-k}) |det g| int_0^1 (1-t^2)^{(k-2)/2} t^{d-k+1} dt)
double c_constant(const IwasawaChain& chain, int k);
// Same constant by c_0 = 1, c_1 = 2/lambda_d, c_k = 2k alpha_k c_{k-1} / lambda_{d-k+1}.
// Accepts 0 <= k <= d-1.
double c_constant_recursive(const IwasawaChain& chain, int k);
// c_0..c_{d-1}, closed form for k >= 1.
std::vector<double> c_constants(const IwasawaChain& chain);

// N_T(g) against c_k int_0^T N_t(g^{(d-k)}) (T^2-t^2)^{(k-2)/2} t dt + sum_j c_j H^{(j)}.
struct InductiveReport {
  int depth = 0;
  double lhs = 0.0;
  double main_piece = 0.0;
  std::vector<double> h_pieces;  // c_j H^{(j)}_T(g^{(d-j-1)}, lambda_{d-j}, x^{(d-j-1)})
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool boundary_hit = false;
};

// k = 1: 2 P_T(g^{(d-1)})/lambda_d + H_T(g^{(d-1)}, lambda_d, x^{(d-1)}).
// Tolerance 1e-6 (1 + N_T). Needs d >= 2.
InductiveReport verify_reduction(const LatticeBasis& g, double T, unsigned threads = 1);

// General depth, 1 <= k <= d-1. The integral is evaluated as
// c_k smoothed_sum(g^{(d-k)}, T, k) / k. Tolerance 1e-5 (1 + N_T).
InductiveReport verify_inductive(const LatticeBasis& g, double T, int k,
                                 SmoothingOptions opts = {}, unsigned threads = 1);

// c_{d-1} 2 int_0^1 (1-t^2)^{(d-1)/2} dt T^d / (lambda_1 (d-1)), which should be
// vol(B_T)/|det g|. Needs d >= 2.
double inductive_main_term(const IwasawaChain& chain, double T);

}  // namespace shearcount
