#include "shearcount/oscillatory_sums.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

#include "shearcount/errors.hpp"
#include "shearcount/quadrature.hpp"
#include "shearcount/special_functions.hpp"

namespace shearcount {

namespace {

constexpr double kPi = std::numbers::pi;

double dot(std::span<const long long> n, const Eigen::VectorXd& x) {
  double y = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) y += static_cast<double>(n[i]) * x[static_cast<Eigen::Index>(i)];
  return y;
}

// One point's contribution to H^{(j)}, j >= 1, in closed form. `r` is the
// fiber radius sqrt(T^2 - |ng|^2).
double smoothed_point_closed(double r, double y, double lambda, int j, double moment) {
  const double reach = r / lambda;
  const auto lo = static_cast<long long>(std::ceil(-reach - y));
  const auto hi = static_cast<long long>(std::floor(reach - y));
  const double r2 = r * r;
  double sum = 0.0;
  for (long long k = lo; k <= hi; ++k) {
    const double off = lambda * (static_cast<double>(k) + y);
    const double w = r2 - off * off;
    if (w > 0.0) sum += radial_power(w, j);
  }
  return (sum - 2.0 * std::pow(r, j + 1) * moment / lambda) / j;
}

// Same integral by Gauss-Legendre on each interval where both sawtooth terms
// are linear, with u = r sin(theta) on every piece.
double smoothed_point_gauss(double r, double y, double lambda, int j,
                            const quad::GaussLegendreRule& rule) {
  std::vector<double> cuts{0.0, r};
  const double reach = r / lambda;
  // s(u/lambda - y) jumps where u/lambda - y is an integer, s(u/lambda + y) likewise.
  for (double shift : {y, -y}) {
    for (auto m = static_cast<long long>(std::ceil(-shift)); m + shift < reach; ++m) {
      const double u = lambda * (static_cast<double>(m) + shift);
      if (u > 0.0 && u < r) cuts.push_back(u);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const double scale = std::pow(r, j);
  auto integrand = [&](double theta) {
    const double u = r * std::sin(theta);
    const double c = std::cos(theta);
    return (sawtooth(u / lambda - y) + sawtooth(u / lambda + y)) * scale * std::pow(c, j - 1) *
           std::sin(theta);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::asin(std::clamp(cuts[i] / r, -1.0, 1.0));
    const double b = std::asin(std::clamp(cuts[i + 1] / r, -1.0, 1.0));
    if (b > a) total += quad::gauss_panel(integrand, a, b, rule);
  }
  return total;
}

struct HAccumulator {
  const std::vector<Eigen::VectorXd>* xs = nullptr;
  double t2 = 0.0;
  double lambda = 1.0;
  int j = 0;
  double moment = 0.0;
  SmoothingOptions opts;
  const quad::GaussLegendreRule* rule = nullptr;
  std::vector<double> values;
  std::uint64_t terms = 0;

  void operator()(std::span<const long long> n, double norm2) {
    const double r = std::sqrt(std::max(t2 - norm2, 0.0));
    ++terms;
    for (std::size_t s = 0; s < xs->size(); ++s) {
      const double y = dot(n, (*xs)[s]);
      if (j == 0) {
        values[s] += sawtooth(r / lambda - y) + sawtooth(r / lambda + y);
      } else if (opts.route == SmoothingRoute::closed_form) {
        values[s] += smoothed_point_closed(r, y, lambda, j, moment);
      } else {
        values[s] += smoothed_point_gauss(r, y, lambda, j, *rule);
      }
    }
  }

  void merge(const HAccumulator& other) {
    for (std::size_t s = 0; s < values.size(); ++s) values[s] += other.values[s];
    terms += other.terms;
  }
};

struct SeriesPoint {
  double r = 0.0;
  double y = 0.0;
};

struct PointCollector {
  const Eigen::VectorXd* x = nullptr;
  double t2 = 0.0;
  std::vector<SeriesPoint> points;
  void operator()(std::span<const long long> n, double norm2) {
    points.push_back({std::sqrt(std::max(t2 - norm2, 0.0)), dot(n, *x)});
  }
  void merge(const PointCollector& other) {
    points.insert(points.end(), other.points.begin(), other.points.end());
  }
};

TorusEstimate summarize(const std::vector<double>& values, bool squared) {
  TorusEstimate est;
  est.samples = static_cast<int>(values.size());
  if (values.empty()) return est;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : values) {
    const double q = squared ? v * v : v;
    sum += q;
    sum_sq += q * q;
  }
  const double n = static_cast<double>(values.size());
  est.value = sum / n;
  if (values.size() > 1) {
    const double var = std::max(0.0, (sum_sq - n * est.value * est.value) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

std::vector<Eigen::VectorXd> torus_points(int dim, const MeanSquareOptions& opts) {
  if (opts.rule == TorusRule::grid) return torus_grid(dim, opts.per_dim);
  return torus_samples(dim, opts.samples, opts.seed);
}

}  // namespace

void validate(const OscSumQuery& q) {
  if (!(q.lambda > 0.0)) throw DomainError("oscillatory sum: lambda must be > 0");
  if (!(q.radius > 0.0)) throw DomainError("oscillatory sum: T must be > 0");
  if (q.smooth_order < 0) throw DomainError("oscillatory sum: j must be >= 0");
  if (q.x.size() != q.base.dim()) throw DimMismatch("oscillatory sum: x must match the base dimension");
}

HValues h_values(const TriangularForm& tri, double lambda, double T, int j,
                 const std::vector<Eigen::VectorXd>& xs, SmoothingOptions opts, unsigned threads) {
  if (!(lambda > 0.0) || !(T > 0.0) || j < 0) throw DomainError("h_values: need lambda > 0, T > 0, j >= 0");
  HAccumulator init;
  init.xs = &xs;
  init.t2 = T * T;
  init.lambda = lambda;
  init.j = j;
  init.moment = j > 0 ? unit_moment(j) : 0.0;
  init.opts = opts;
  init.rule = &quad::gauss_legendre(opts.gauss_order);
  init.values.assign(xs.size(), 0.0);
  const auto folded = fold_points(tri, T, init, threads);
  return {folded.value.values, folded.value.terms, folded.boundary_hit};
}

LatticeSum h_sum(const OscSumQuery& q, unsigned threads) {
  validate(q);
  const std::vector<Eigen::VectorXd> xs{q.x};
  const HValues h = h_values(triangular_form(q.base), q.lambda, q.radius, 0, xs, {}, threads);
  return {h.values[0], h.terms, h.boundary_hit};
}

LatticeSum h_smoothed(const OscSumQuery& q, SmoothingOptions opts, unsigned threads) {
  validate(q);
  if (q.smooth_order < 1) throw DomainError("h_smoothed: j must be >= 1");
  const std::vector<Eigen::VectorXd> xs{q.x};
  const HValues h =
      h_values(triangular_form(q.base), q.lambda, q.radius, q.smooth_order, xs, opts, threads);
  return {h.values[0], h.terms, h.boundary_hit};
}

double h_sum_series(const OscSumQuery& q, int M) {
  validate(q);
  if (M < 1) throw DomainError("h_sum_series: M must be >= 1");
  PointCollector init{&q.x, q.radius * q.radius, {}};
  const auto pts = fold_points(triangular_form(q.base), q.radius, init).value.points;
  double total = 0.0;
  for (const auto& p : pts) {
    const double phase_r = p.r / q.lambda;
    double inner = 0.0;
    for (int m = 1; m <= M; ++m) {
      inner += std::sin(2.0 * kPi * m * phase_r) * std::cos(2.0 * kPi * m * p.y) / m;
    }
    total += inner;
  }
  return 2.0 / kPi * total;
}

double osc_integral_I_growth_constant(int j) {
  if (j < 1) throw DomainError("growth constant needs j >= 1");
  static std::mutex guard;
  static std::map<int, double> known;
  std::lock_guard lock(guard);
  if (auto it = known.find(j); it != known.end()) return it->second;
  double best = 0.0;
  for (double X = 0.005; X <= 60.0; X += 0.005) {
    best = std::max(best, std::abs(osc_integral_I_bessel(j, X)) / std::pow(X, 0.5 * j));
  }
  known[j] = 1.05 * best;
  return known[j];
}

SeriesValue h_smoothed_series(const OscSumQuery& q, int M) {
  validate(q);
  const int j = q.smooth_order;
  if (j < 1) throw DomainError("h_smoothed_series: j must be >= 1");
  if (M < 1) throw DomainError("h_smoothed_series: M must be >= 1");
  PointCollector init{&q.x, q.radius * q.radius, {}};
  const auto pts = fold_points(triangular_form(q.base), q.radius, init).value.points;
  double total = 0.0;
  double radial = 0.0;
  for (const auto& p : pts) {
    double inner = 0.0;
    for (int m = 1; m <= M; ++m) {
      inner += osc_integral_I_bessel(j, m * p.r / q.lambda) * std::cos(2.0 * kPi * m * p.y) /
               std::pow(static_cast<double>(m), 1 + j);
    }
    total += inner;
    radial += std::pow(p.r / q.lambda, 0.5 * j);
  }
  const double prefactor = 2.0 * std::pow(q.lambda, j) / kPi;
  // sum_{m > M} m^{-1-j/2} <= (2/j) M^{-j/2}
  const double tail = prefactor * osc_integral_I_growth_constant(j) * radial * (2.0 / j) *
                      std::pow(static_cast<double>(M), -0.5 * j);
  return {prefactor * total, tail};
}

double h_average_exact(double lambda, double T, int j) {
  if (!(lambda > 0.0) || !(T > 0.0) || j < 0) throw DomainError("h_average_exact: bad arguments");
  const double ratio = T / lambda;
  if (j == 0) return 1.0 - 2.0 * (ratio - std::floor(ratio));
  return std::pow(lambda, j) / j * sum2int_1d(ratio, j).error;
}

std::vector<Eigen::VectorXd> torus_grid(int dim, int per_dim) {
  if (dim < 0 || per_dim < 1) throw DomainError("torus_grid: bad size");
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(per_dim);
  std::vector<Eigen::VectorXd> out;
  out.reserve(total);
  std::vector<int> idx(dim, 0);
  for (std::size_t s = 0; s < total; ++s) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = (idx[i] + 0.5) / per_dim;
    out.push_back(std::move(x));
    for (int i = dim - 1; i >= 0; --i) {
      if (++idx[i] < per_dim) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> torus_samples(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = unit(rng);
    out.push_back(std::move(x));
  }
  return out;
}

double h_average(const LatticeBasis& base, double lambda, double T, int j, int per_dim,
                 unsigned threads) {
  if (j == 0) return h_average_exact(lambda, T, 0);
  const auto xs = torus_grid(base.dim(), per_dim);
  const HValues h = h_values(triangular_form(base), lambda, T, j, xs, {}, threads);
  return summarize(h.values, false).value;
}

TorusEstimate h_mean_square(const LatticeBasis& base, double lambda, double T, int j,
                            MeanSquareOptions opts, unsigned threads) {
  const auto xs = torus_points(base.dim(), opts);
  const HValues h = h_values(triangular_form(base), lambda, T, j, xs, {}, threads);
  return summarize(h.values, true);
}

TorusEstimate h_torus_mean(const LatticeBasis& base, double lambda, double T, int j,
                           MeanSquareOptions opts, unsigned threads) {
  const auto xs = torus_points(base.dim(), opts);
  const HValues h = h_values(triangular_form(base), lambda, T, j, xs, {}, threads);
  return summarize(h.values, false);
}

}  // namespace shearcount
