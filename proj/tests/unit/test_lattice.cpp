#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "shearcount/errors.hpp"
#include "shearcount/lattice.hpp"

using namespace shearcount;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Rebuilds g from lambdas and shear vectors only, level by level.
Eigen::MatrixXd rebuild(const IwasawaChain& c) {
  Eigen::MatrixXd r(1, 1);
  r(0, 0) = c.lambda(1);
  for (int l = 2; l <= c.dim(); ++l) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(l, l);
    next.topLeftCorner(l - 1, l - 1) = r;
    next.block(0, l - 1, l - 1, 1) = c.lambda(l) * c.shear_vector(l - 1);
    next(l - 1, l - 1) = c.lambda(l);
    r = next;
  }
  return r * c.rotation(c.dim());
}

}  // namespace

TEST_CASE("make_lattice") {
  const LatticeBasis id = make_lattice(Eigen::MatrixXd::Identity(2, 2));
  CHECK(id.dim() == 2);
  CHECK(id.det() == 1.0);
  CHECK(make_lattice(mat({{2, 1}, {0, 1}})).det() == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_lattice(mat({{1, 2}, {2, 4}})), SingularBasis);
  CHECK_THROWS_AS(make_lattice(Eigen::MatrixXd::Zero(2, 3)), DimMismatch);
  CHECK_THROWS_AS(make_lattice(Eigen::MatrixXd(0, 0)), DimMismatch);
}

TEST_CASE("iwasawa chain examples") {
  const IwasawaChain c = iwasawa_chain(make_lattice(Eigen::MatrixXd::Identity(3, 3)));
  for (int l = 1; l <= 3; ++l) {
    CHECK(c.lambda(l) == 1.0);
    CHECK((c.rotation(l) - Eigen::MatrixXd::Identity(l, l)).norm() < 1e-15);
  }
  for (int l = 1; l <= 2; ++l) CHECK(c.shear_vector(l).norm() == 0.0);

  const IwasawaChain t = iwasawa_chain(make_lattice(mat({{2, 1}, {0, 1}})));
  CHECK(t.sub_basis(1).rows()(0, 0) == doctest::Approx(2.0));
  CHECK(t.lambda(2) == doctest::Approx(1.0));
  CHECK(t.shear_vector(1)(0) == doctest::Approx(1.0));
  CHECK((t.rotation(2) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
  CHECK_FALSE(t.orientation_flipped);
}

TEST_CASE("iwasawa reconstruction on random bases") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 4;
    const LatticeBasis g = testing::random_basis(d, rng, 1e-3);
    const IwasawaChain c = iwasawa_chain(g);
    const Eigen::MatrixXd back = rebuild(c);
    CHECK((back - g.rows()).norm() / g.rows().norm() < 1e-10);
    const Eigen::MatrixXd& k = c.rotation(d);
    CHECK((k * k.transpose() - Eigen::MatrixXd::Identity(d, d)).norm() < 1e-12);
    CHECK(std::abs(k.determinant() - 1.0) < 1e-12);
    double prod = 1.0;
    for (int l = 1; l <= d; ++l) {
      CHECK(c.lambda(l) > 0.0);
      prod *= c.lambda(l);
    }
    CHECK(std::abs(prod / g.covolume() - 1) < 1e-10);
    // level-by-level block form
    for (int l = 2; l < d; ++l) {
      const Eigen::MatrixXd& sub = c.sub_basis(l).rows();
      CHECK(std::abs(sub(l - 1, l - 1) - c.lambda(l)) < 1e-12 * (1 + c.lambda(l)));
    }
    // lambda_d is the length of the last row
    CHECK(std::abs(c.lambda(d) - g.rows().row(d - 1).norm()) < 1e-12 * c.lambda(d));
  }
}

TEST_CASE("negative determinant flips the first row") {
  const LatticeBasis g = make_lattice(mat({{0, 1}, {1, 0}}));
  const IwasawaChain c = iwasawa_chain(g);
  CHECK(c.orientation_flipped);
  Eigen::MatrixXd flipped = g.rows();
  flipped.row(0) *= -1;
  CHECK((rebuild(c) - flipped).norm() < 1e-12);
}

TEST_CASE("chain coordinates do not depend on a right rotation") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 4;
    const LatticeBasis g = testing::random_basis(d, rng);
    const LatticeBasis gk = make_lattice(g.rows() * testing::random_rotation(d, rng));
    const IwasawaChain a = iwasawa_chain(g);
    const IwasawaChain b = iwasawa_chain(gk);
    for (int l = 1; l <= d; ++l) CHECK(std::abs(a.lambda(l) - b.lambda(l)) < 1e-10 * a.lambda(l));
    for (int l = 1; l < d; ++l) {
      CHECK((a.shear_vector(l) - b.shear_vector(l)).norm() < 1e-9 * (1 + a.shear_vector(l).norm()));
    }
  }
}

TEST_CASE("dual basis") {
  CHECK((dual_basis(make_lattice(Eigen::MatrixXd::Identity(3, 3))).rows() -
         Eigen::MatrixXd::Identity(3, 3))
            .norm() == 0.0);
  CHECK((dual_basis(make_lattice(2 * Eigen::MatrixXd::Identity(2, 2))).rows() -
         0.5 * Eigen::MatrixXd::Identity(2, 2))
            .norm() < 1e-15);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const LatticeBasis g = testing::random_basis(2 + trial % 4, rng);
    const LatticeBasis dual = dual_basis(g);
    const int d = g.dim();
    CHECK((dual.rows() * g.rows().transpose() - Eigen::MatrixXd::Identity(d, d)).norm() < 1e-12 * d * dual.rows().norm() * g.rows().norm());
    CHECK((dual_basis(dual).rows() - g.rows()).norm() < 1e-10 * g.rows().norm());
  }
}

TEST_CASE("shortest vector") {
  CHECK(shortest_vector_length(make_lattice(Eigen::MatrixXd::Identity(2, 2))) == doctest::Approx(1.0));
  CHECK(shortest_vector_length(make_lattice(3 * Eigen::MatrixXd::Identity(3, 3))) ==
        doctest::Approx(3.0));
  const LatticeBasis g = make_lattice(mat({{1, 0}, {0.5, 0.1}}));
  double best = 1e300;
  for (int a = -20; a <= 20; ++a) {
    for (int b = -20; b <= 20; ++b) {
      if (a == 0 && b == 0) continue;
      best = std::min(best, std::hypot(a * 1.0 + b * 0.5, b * 0.1));
    }
  }
  CHECK(shortest_vector_length(g) == doctest::Approx(best).epsilon(1e-14));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    const LatticeBasis h = testing::random_basis(d, rng, 0.5);
    double brute = 1e300;
    const double box = h.rows().rowwise().norm().minCoeff();
    testing::brute_force(h, box * 1.0001, [&](const Eigen::VectorXd& n, double n2) {
      if (n.norm() > 0) brute = std::min(brute, std::sqrt(n2));
    });
    const double direct = shortest_vector_length(h);
    CHECK(direct == doctest::Approx(brute).epsilon(1e-12));
    // the same lattice under an integral change of basis
    const LatticeBasis moved = make_lattice(testing::random_unimodular(d, rng) * h.rows());
    CHECK(shortest_vector_length(moved) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("size reduction keeps the lattice") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const LatticeBasis g = testing::random_basis(3, rng);
    const LatticeBasis r = size_reduce(g);
    const Eigen::MatrixXd change = r.rows() * g.rows().inverse();
    CHECK((change - change.array().round().matrix()).norm() < 1e-9);
    CHECK(std::abs(std::abs(change.determinant()) - 1.0) < 1e-9);
  }
}

TEST_CASE("shear parameters") {
  ShearParameter u(4, 2);
  CHECK(u.free_positions().size() == 5);  // (0,2) (0,3) (1,2) (1,3) (2,3)
  CHECK_THROWS_AS(u.set(0, 1, 0.3), DomainError);
  u.set(0, 1, 2.0);  // integer entries reduce to zero
  CHECK(u.get(0, 1) == 0.0);
  u.set(0, 3, 1.25);
  CHECK(u.get(0, 3) == 0.25);
  u.set(1, 2, -0.25);
  CHECK(u.get(1, 2) == 0.75);
  CHECK_THROWS_AS(u.set(2, 1, 0.5), DomainError);
  CHECK_THROWS_AS(ShearParameter(3, 0), DomainError);
  CHECK_THROWS_AS(ShearParameter(3, 3), DomainError);

  std::ostringstream out;
  write_shear(out, u);
  std::istringstream in(out.str());
  const ShearParameter back = parse_shear(in);
  CHECK((back.matrix() - u.matrix()).norm() == 0.0);

  std::mt19937_64 rng(6);
  const ShearParameter full = ShearParameter::random(4, 1, rng);
  CHECK(full.free_positions().size() == 6);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (j <= i) CHECK(full.matrix()(i, j) == (i == j ? 1.0 : 0.0));
      else CHECK((full.get(i, j) >= 0.0 && full.get(i, j) < 1.0));
    }
  }
}

TEST_CASE("apply_shear") {
  const LatticeBasis id = make_lattice(Eigen::MatrixXd::Identity(2, 2));
  CHECK((apply_shear(ShearParameter(2, 1), id).rows() - id.rows()).norm() == 0.0);
  ShearParameter u(2, 1);
  u.set(0, 1, 0.5);
  CHECK((apply_shear(u, id).rows() - mat({{1, 0.5}, {0, 1}})).norm() == 0.0);
  CHECK_THROWS_AS(apply_shear(ShearParameter(3, 1), id), DimMismatch);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const LatticeBasis g = testing::random_basis(3, rng);
    const LatticeBasis h = apply_shear(ShearParameter::random(3, 1, rng), g);
    CHECK(h.det() == doctest::Approx(g.det()).epsilon(1e-12));
  }
}

TEST_CASE("basis text format") {
  std::istringstream in("2\n2 1\n0 1\n");
  const LatticeBasis g = parse_basis(in);
  CHECK(g.det() == doctest::Approx(2.0));
  std::ostringstream out;
  write_basis(out, g);
  std::istringstream again(out.str());
  CHECK((parse_basis(again).rows() - g.rows()).norm() == 0.0);
  std::istringstream short_in("2\n1 0\n0\n");
  CHECK_THROWS_AS(parse_basis(short_in), ParseError);
  std::istringstream bad("x\n");
  CHECK_THROWS_AS(parse_basis(bad), ParseError);
  CHECK_THROWS_AS(read_basis_file("/nonexistent/basis.txt"), ParseError);
}
