#include "shearcount/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "shearcount/counting.hpp"
#include "shearcount/decomposition.hpp"
#include "shearcount/errors.hpp"
#include "shearcount/oscillatory_sums.hpp"
#include "shearcount/parallel.hpp"
#include "shearcount/special_functions.hpp"

namespace shearcount {

namespace {

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  const double n = static_cast<double>(v.size());
  if (v.empty()) return m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return m;
}

void require_radii(std::span<const double> Ts) {
  if (Ts.empty()) throw DomainError("need at least one radius");
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    if (!(Ts[i] > 0.0)) throw DomainError("radii must be > 0");
    if (i > 0 && !(Ts[i] > Ts[i - 1])) throw DomainError("radii must be increasing");
  }
}

// remainders[t][i] = R_{T_t}(Z^d u_i g).
std::vector<std::vector<double>> remainders(const LatticeBasis& g,
                                            const std::vector<ShearParameter>& shears,
                                            std::span<const double> Ts, unsigned threads) {
  std::vector<std::vector<double>> out(Ts.size(), std::vector<double>(shears.size(), 0.0));
  parallel_for(shears.size(), threads, [&](std::size_t i) {
    const LatticeBasis h = apply_shear(shears[i], g);
    const TriangularForm tri = triangular_form(h);
    for (std::size_t t = 0; t < Ts.size(); ++t) {
      out[t][i] = count_points(tri, h.covolume(), Ts[t], 1).remainder;
    }
  });
  return out;
}

}  // namespace

double bound_scale(int d, double T) {
  const double lg = std::log(std::max(T, std::numbers::e));
  return std::pow(T, d - 1) * lg * lg;
}

ShearParameter sample_shear(int d, int l, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  return ShearParameter::random(d, l, rng);
}

std::vector<MeanSquareEstimate> shear_mean_square(const LatticeBasis& g, int l,
                                                  std::span<const double> Ts, int N,
                                                  std::uint64_t seed, bool strict,
                                                  unsigned threads) {
  const int d = g.dim();
  if (d < 2) throw DomainError("shear families need d >= 2");
  if (l < 1 || l > d - 1) throw DomainError("family index l must lie in [1, d-1]");
  if (strict && l >= 2 && (d < 4 || l > d / 2)) {
    throw FamilyOutOfRange("U_{d,l} with l >= 2 is covered only for d >= 4 and l <= d/2");
  }
  if (N < 2) throw DomainError("need at least 2 samples");
  require_radii(Ts);

  std::vector<ShearParameter> shears;
  shears.reserve(N);
  for (int i = 0; i < N; ++i) shears.push_back(sample_shear(d, l, seed, i));
  const auto rem = remainders(g, shears, Ts, threads);

  std::vector<MeanSquareEstimate> out;
  for (std::size_t t = 0; t < Ts.size(); ++t) {
    std::vector<double> sq(rem[t].size());
    std::transform(rem[t].begin(), rem[t].end(), sq.begin(), [](double r) { return r * r; });
    const Moments first = moments(rem[t]);
    const Moments second = moments(sq);
    MeanSquareEstimate e;
    e.T = Ts[t];
    e.samples = N;
    e.mean = first.mean;
    e.mean_std_error = first.std_error;
    e.mean_square = second.mean;
    e.std_error = second.std_error;
    e.bound_ratio = e.mean_square / bound_scale(d, e.T);
    e.family_d = d;
    e.family_l = l;
    out.push_back(e);
  }
  return out;
}

double shear_average_prediction(const IwasawaChain& chain, double T) {
  const int d = chain.dim();
  if (d < 2) throw DomainError("shear averages need d >= 2");
  const double lam = chain.lambda(1);
  return std::pow(lam, d - 1) * c_constant(chain, d - 1) / (d - 1) *
         sum2int_1d(T / lam, d - 1).error;
}

double shear_average_prediction_exact(const IwasawaChain& chain, double T) {
  const int d = chain.dim();
  double total = shear_average_prediction(chain, T);
  for (int j = 0; j <= d - 2; ++j) {
    const double cj = j == 0 ? 1.0 : c_constant(chain, j);
    total += cj * h_average_exact(chain.lambda(d - j), T, j);
  }
  return total;
}

std::vector<ShearAverage> shear_average(const LatticeBasis& g, std::span<const double> Ts, int N,
                                        std::uint64_t seed, AverageRule rule, unsigned threads) {
  const int d = g.dim();
  if (d < 2) throw DomainError("shear averages need d >= 2");
  if (N < 2) throw DomainError("need at least 2 samples");
  if (rule == AverageRule::grid && d != 2) throw DomainError("grid shear averages need d = 2");
  require_radii(Ts);

  std::vector<ShearParameter> shears;
  shears.reserve(N);
  for (int i = 0; i < N; ++i) {
    if (rule == AverageRule::grid) {
      ShearParameter u(2, 1);
      u.set(0, 1, (i + 0.5) / N);
      shears.push_back(u);
    } else {
      shears.push_back(sample_shear(d, 1, seed, i));
    }
  }
  const auto rem = remainders(g, shears, Ts, threads);
  const IwasawaChain chain = iwasawa_chain(g);

  std::vector<ShearAverage> out;
  for (std::size_t t = 0; t < Ts.size(); ++t) {
    const Moments m = moments(rem[t]);
    ShearAverage row;
    row.T = Ts[t];
    row.samples = N;
    row.average = m.mean;
    row.std_error = m.std_error;
    row.prediction = shear_average_prediction(chain, Ts[t]);
    row.prediction_exact = shear_average_prediction_exact(chain, Ts[t]);
    out.push_back(row);
  }
  return out;
}

SharpnessScan sharpness_scan(const LatticeBasis& g, double T0, int steps, int N,
                             std::uint64_t seed, unsigned threads) {
  if (steps < 1) throw DomainError("sharpness scan needs at least one step");
  std::vector<double> Ts;
  for (int i = 0; i < steps; ++i) Ts.push_back(std::floor(T0) + (i + 0.5) / steps);
  SharpnessScan scan;
  scan.rows = shear_average(g, Ts, N, seed, AverageRule::monte_carlo, threads);
  const double half = 0.5 * (g.dim() - 1);
  for (const auto& row : scan.rows) {
    const double ratio = std::abs(row.average) / std::pow(row.T, half);
    if (ratio > scan.witness_ratio) {
      scan.witness_ratio = ratio;
      scan.witness_T = row.T;
    }
  }
  return scan;
}

CompactEstimate compact_set_mean_square(int d, const std::vector<std::vector<double>>& diagonals,
                                        std::span<const double> Ts, int N, std::uint64_t seed,
                                        unsigned threads) {
  if (diagonals.empty()) throw DomainError("need at least one diagonal slice");
  CompactEstimate out;
  out.max_bound_ratio.assign(Ts.size(), 0.0);
  for (const auto& a : diagonals) {
    if (static_cast<int>(a.size()) != d) throw DimMismatch("diagonal has the wrong length");
    double prod = 1.0;
    for (double v : a) {
      if (!(v > 0.0)) throw NotUnimodular("diagonal entries must be positive");
      prod *= v;
    }
    if (std::abs(prod - 1.0) > 1e-12) throw NotUnimodular("diagonal entries must multiply to 1");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = a[i];
    auto est = shear_mean_square(make_lattice(m), 1, Ts, N, seed, true, threads);
    for (std::size_t t = 0; t < est.size(); ++t) {
      out.max_bound_ratio[t] = std::max(out.max_bound_ratio[t], est[t].bound_ratio);
    }
    out.diagonals.push_back(a);
    out.per_slice.push_back(std::move(est));
  }
  return out;
}

ExponentFit growth_fit(std::span<const double> Ts, std::span<const double> values) {
  if (Ts.size() != values.size()) throw DimMismatch("growth_fit: radii and values differ in length");
  ExponentFit fit;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    if (!(Ts[i] > 0.0) || !(values[i] > 0.0)) throw DomainError("growth_fit needs positive data");
    fit.points.emplace_back(std::log(Ts[i]), std::log(values[i]));
  }
  std::vector<double> xs;
  for (const auto& p : fit.points) xs.push_back(p.first);
  std::sort(xs.begin(), xs.end());
  if (std::unique(xs.begin(), xs.end()) - xs.begin() < 4) {
    throw InsufficientPoints("growth_fit needs at least 4 distinct radii");
  }
  const double n = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

ExponentFit growth_fit(const std::vector<MeanSquareEstimate>& estimates) {
  std::vector<double> Ts, ms;
  for (const auto& e : estimates) {
    Ts.push_back(e.T);
    ms.push_back(e.mean_square);
  }
  return growth_fit(Ts, ms);
}

std::vector<double> radius_grid(double a, double b, int n, bool golden, double jitter) {
  if (!(a > 0.0) || !(b >= a) || n < 1) throw DomainError("radius grid needs 0 < a <= b and n >= 1");
  constexpr double conj = 0.6180339887498949;
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    double T = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    if (golden) {
      const double f = (i + 1) * conj;
      T += jitter * (f - std::floor(f));
    }
    out.push_back(T);
  }
  return out;
}

}  // namespace shearcount
