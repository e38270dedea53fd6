#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "shearcount/enumeration.hpp"

namespace shearcount {

// Invertible d x d matrix g; the lattice is the integer span of its rows,
// Z^d g. Immutable once built.
class LatticeBasis {
 public:
  LatticeBasis() = default;

  int dim() const { return static_cast<int>(rows_.rows()); }
  const Eigen::MatrixXd& rows() const { return rows_; }
  double det() const { return det_; }
  double covolume() const { return std::abs(det_); }

 private:
  friend LatticeBasis make_lattice(Eigen::MatrixXd rows);
  Eigen::MatrixXd rows_;
  double det_ = 0.0;
};

// Throws DimMismatch for non-square or empty input and SingularBasis when
// |det| < 1e-12 * (max row norm)^d.
LatticeBasis make_lattice(Eigen::MatrixXd rows);

// Nested coordinates g^{(l)}, lambda_l, x^{(l)}, k^{(l)}:
//
//   g^{(l)} = [[g^{(l-1)}, lambda_l x^{(l-1)}], [0, lambda_l]] k^{(l)}.
//
// Extracted by Gram-Schmidt on the rows from the last row upwards, so that
// g = R K with R upper triangular (diagonal lambda_1..lambda_d) and K in
// SO(d). In this representative g^{(l)} is the leading l x l block of R for
// l < d, k^{(l)} is the identity for l < d and k^{(d)} = K. Entries of R above
// the diagonal are lambda_l times the shear vectors: R_{i,l} = lambda_l x^{(l-1)}_i.
struct IwasawaChain {
  std::vector<double> lambdas;                // lambda_1..lambda_d
  std::vector<Eigen::VectorXd> shear_vectors; // x^{(1)}..x^{(d-1)}, x^{(l)} in R^l
  std::vector<LatticeBasis> sub_bases;        // g^{(1)}..g^{(d)}
  std::vector<Eigen::MatrixXd> rotations;     // k^{(1)}..k^{(d)}
  Eigen::MatrixXd upper;                      // R = u a
  bool orientation_flipped = false;           // first row negated to make det > 0

  int dim() const { return static_cast<int>(lambdas.size()); }
  // 1-based accessors matching the nesting level l.
  double lambda(int l) const { return lambdas.at(l - 1); }
  const Eigen::VectorXd& shear_vector(int l) const { return shear_vectors.at(l - 1); }
  const LatticeBasis& sub_basis(int l) const { return sub_bases.at(l - 1); }
  const Eigen::MatrixXd& rotation(int l) const { return rotations.at(l - 1); }
};

IwasawaChain iwasawa_chain(const LatticeBasis& g);

// Rows of R for the enumeration in enumeration.hpp.
TriangularForm triangular_form(const IwasawaChain& chain);
TriangularForm triangular_form(const LatticeBasis& g);
// Leading l x l block of the chain's R, i.e. the triangular form of g^{(l)}.
TriangularForm triangular_form(const IwasawaChain& chain, int l);

// B' with B' g^T = I.
LatticeBasis dual_basis(const LatticeBasis& g);

// Pairwise size reduction (b_i -= round(<b_i,b_j>/|b_j|^2) b_j for shorter
// b_j) until no row changes. Same lattice.
LatticeBasis size_reduce(const LatticeBasis& g);

// min |n g| over nonzero n, by enumeration inside the ball whose radius is
// the shortest row after size reduction.
double shortest_vector_length(const LatticeBasis& g);

// Point u of U_{d,l}(Z)\U_{d,l}(R): strictly upper triangular entries in
// [0, 1), zero in the first l columns. l = 1 is the full group U_d.
class ShearParameter {
 public:
  ShearParameter(int dim, int zero_cols);

  int dim() const { return dim_; }
  int zero_cols() const { return zero_cols_; }

  // 0-based (row, col) with row < col. Values are reduced mod 1. Throws
  // DomainError below the diagonal or inside the zero columns (unless the
  // value is an integer, which reduces to 0).
  void set(int row, int col, double value);
  double get(int row, int col) const;

  // Positions that may be nonzero, row-major.
  std::vector<std::pair<int, int>> free_positions() const;
  // Unit upper triangular matrix U.
  Eigen::MatrixXd matrix() const;

  // Entries i.i.d. uniform on [0, 1): Lebesgue (Haar) measure on the torus.
  static ShearParameter random(int dim, int zero_cols, std::mt19937_64& rng);

 private:
  int dim_;
  int zero_cols_;
  Eigen::MatrixXd entries_;
};

// U g. Throws DimMismatch.
LatticeBasis apply_shear(const ShearParameter& u, const LatticeBasis& g);

// Text formats. Basis: "d" then d lines of d reals. Shear: "d l" then the
// values at free_positions() in row-major order.
LatticeBasis parse_basis(std::istream& in);
LatticeBasis read_basis_file(const std::string& path);
void write_basis(std::ostream& out, const LatticeBasis& g);
ShearParameter parse_shear(std::istream& in);
void write_shear(std::ostream& out, const ShearParameter& u);

}  // namespace shearcount
