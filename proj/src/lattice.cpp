#include "shearcount/lattice.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "shearcount/errors.hpp"

namespace shearcount {

namespace {

struct MinNorm {
  double best = std::numeric_limits<double>::infinity();
  void operator()(std::span<const long long> n, double norm2) {
    for (long long v : n) {
      if (v != 0) {
        best = std::min(best, norm2);
        return;
      }
    }
  }
  void merge(const MinNorm& other) { best = std::min(best, other.best); }
};

}  // namespace

LatticeBasis make_lattice(Eigen::MatrixXd rows) {
  if (rows.rows() == 0 || rows.rows() != rows.cols()) {
    throw DimMismatch("basis must be a non-empty square matrix");
  }
  if (!rows.allFinite()) throw SingularBasis("basis has non-finite entries");
  const int d = static_cast<int>(rows.rows());
  const double det = rows.partialPivLu().determinant();
  const double scale = rows.rowwise().norm().maxCoeff();
  if (!(std::abs(det) >= 1e-12 * std::pow(scale, d))) {
    throw SingularBasis("basis is singular or nearly so");
  }
  LatticeBasis g;
  g.rows_ = std::move(rows);
  g.det_ = det;
  return g;
}

IwasawaChain iwasawa_chain(const LatticeBasis& g) {
  const int d = g.dim();
  if (d == 0) throw DimMismatch("empty basis");
  Eigen::MatrixXd b = g.rows();
  IwasawaChain chain;
  if (g.det() < 0.0) {
    b.row(0) = -b.row(0);
    chain.orientation_flipped = true;
  }

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
  for (int i = d - 1; i >= 0; --i) {
    Eigen::VectorXd v = b.row(i).transpose();
    // Two passes of modified Gram-Schmidt against the rows already placed.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = i + 1; j < d; ++j) v -= v.dot(k.row(j).transpose()) * k.row(j).transpose();
    }
    const double norm = v.norm();
    if (!(norm > 0.0)) throw SingularBasis("basis rows are linearly dependent");
    k.row(i) = (v / norm).transpose();
    r(i, i) = norm;
    for (int j = i + 1; j < d; ++j) r(i, j) = b.row(i).dot(k.row(j));
  }

  chain.upper = r;
  chain.lambdas.resize(d);
  for (int l = 0; l < d; ++l) chain.lambdas[l] = r(l, l);
  for (int l = 1; l < d; ++l) {
    // x^{(l)} sits in column l (0-based) above the diagonal, scaled by lambda_{l+1}.
    chain.shear_vectors.push_back(r.block(0, l, l, 1) / r(l, l));
  }
  for (int l = 1; l < d; ++l) {
    chain.sub_bases.push_back(make_lattice(r.topLeftCorner(l, l)));
    chain.rotations.push_back(Eigen::MatrixXd::Identity(l, l));
  }
  chain.sub_bases.push_back(make_lattice(b));
  chain.rotations.push_back(k);
  return chain;
}

TriangularForm triangular_form(const IwasawaChain& chain, int l) {
  TriangularForm tri;
  tri.dim = l;
  tri.r.assign(static_cast<std::size_t>(l) * l, 0.0);
  for (int i = 0; i < l; ++i) {
    for (int j = i; j < l; ++j) tri.r[static_cast<std::size_t>(i) * l + j] = chain.upper(i, j);
  }
  return tri;
}

TriangularForm triangular_form(const IwasawaChain& chain) {
  return triangular_form(chain, chain.dim());
}

TriangularForm triangular_form(const LatticeBasis& g) { return triangular_form(iwasawa_chain(g)); }

LatticeBasis dual_basis(const LatticeBasis& g) {
  Eigen::MatrixXd dual = g.rows().transpose().partialPivLu().inverse();
  return make_lattice(std::move(dual));
}

LatticeBasis size_reduce(const LatticeBasis& g) {
  Eigen::MatrixXd b = g.rows();
  const int d = g.dim();
  for (int sweep = 0; sweep < 1000; ++sweep) {
    bool changed = false;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        const double nj = b.row(j).squaredNorm();
        if (nj > b.row(i).squaredNorm()) continue;
        const double mu = std::round(b.row(i).dot(b.row(j)) / nj);
        if (mu != 0.0) {
          b.row(i) -= mu * b.row(j);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return make_lattice(std::move(b));
}

double shortest_vector_length(const LatticeBasis& g) {
  const LatticeBasis reduced = size_reduce(g);
  const double radius = reduced.rows().rowwise().norm().minCoeff();
  const TriangularForm tri = triangular_form(reduced);
  const auto found = fold_points(tri, radius * (1.0 + 1e-9), MinNorm{});
  return std::sqrt(std::min(found.value.best, radius * radius));
}

ShearParameter::ShearParameter(int dim, int zero_cols)
    : dim_(dim), zero_cols_(zero_cols), entries_(Eigen::MatrixXd::Zero(dim, dim)) {
  if (dim < 1) throw DomainError("shear dimension must be >= 1");
  if (zero_cols < 1 || (dim > 1 && zero_cols > dim - 1) || (dim == 1 && zero_cols != 1)) {
    throw DomainError("shear family U_{d,l} needs 1 <= l <= d-1");
  }
}

void ShearParameter::set(int row, int col, double value) {
  if (row < 0 || col >= dim_ || row >= col) throw DomainError("shear entry must satisfy row < col");
  const double reduced = value - std::floor(value);
  if (col < zero_cols_) {
    if (reduced != 0.0) throw DomainError("shear entry lies in a forced-zero column");
    return;
  }
  entries_(row, col) = reduced;
}

double ShearParameter::get(int row, int col) const { return entries_(row, col); }

std::vector<std::pair<int, int>> ShearParameter::free_positions() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < dim_; ++i) {
    for (int j = std::max(i + 1, zero_cols_); j < dim_; ++j) out.emplace_back(i, j);
  }
  return out;
}

Eigen::MatrixXd ShearParameter::matrix() const {
  return Eigen::MatrixXd::Identity(dim_, dim_) + entries_;
}

ShearParameter ShearParameter::random(int dim, int zero_cols, std::mt19937_64& rng) {
  ShearParameter u(dim, zero_cols);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& [i, j] : u.free_positions()) u.entries_(i, j) = unit(rng);
  return u;
}

LatticeBasis apply_shear(const ShearParameter& u, const LatticeBasis& g) {
  if (u.dim() != g.dim()) throw DimMismatch("shear and basis dimensions differ");
  return make_lattice(u.matrix() * g.rows());
}

LatticeBasis parse_basis(std::istream& in) {
  int d = 0;
  if (!(in >> d) || d < 1) throw ParseError("basis: expected dimension d >= 1 on the first line");
  Eigen::MatrixXd rows(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (!(in >> rows(i, j))) throw ParseError("basis: expected " + std::to_string(d * d) + " entries");
    }
  }
  return make_lattice(std::move(rows));
}

LatticeBasis read_basis_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open basis file '" + path + "'");
  return parse_basis(in);
}

void write_basis(std::ostream& out, const LatticeBasis& g) {
  out << g.dim() << '\n';
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      if (j) out << ' ';
      out.precision(17);
      out << g.rows()(i, j);
    }
    out << '\n';
  }
}

ShearParameter parse_shear(std::istream& in) {
  int d = 0;
  int l = 0;
  if (!(in >> d >> l)) throw ParseError("shear: expected 'd l' on the first line");
  ShearParameter u(d, l);
  for (const auto& [i, j] : u.free_positions()) {
    double v = 0.0;
    if (!(in >> v)) throw ParseError("shear: too few entries");
    u.set(i, j, v);
  }
  return u;
}

void write_shear(std::ostream& out, const ShearParameter& u) {
  out << u.dim() << ' ' << u.zero_cols() << '\n';
  out.precision(17);
  bool first = true;
  for (const auto& [i, j] : u.free_positions()) {
    if (!first) out << ' ';
    out << u.get(i, j);
    first = false;
  }
  out << '\n';
}

}  // namespace shearcount
