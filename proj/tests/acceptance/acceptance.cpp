// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "shearcount/counting.hpp"
#include "shearcount/decomposition.hpp"
#include "shearcount/experiments.hpp"
#include "shearcount/lattice.hpp"
#include "shearcount/oscillatory_sums.hpp"
#include "shearcount/parallel.hpp"
#include "shearcount/special_functions.hpp"

using namespace shearcount;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      detail << " [" << why << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  return out;
}

// Trend check on (x, ratio). The top decade is x >= x_max/10; when fewer than
// two points lie below it the grid is split in half instead. Compared with
// the maximum below the top part, not the maximum over everything (which
// contains the top part and so can never lose).
struct Trend {
  double top = 0.0;
  double rest = 0.0;
  double factor() const { return rest > 0 ? top / rest : INFINITY; }
};

Trend trend(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double cut = xs.back() / 10.0;
  std::size_t split = 0;
  while (split < xs.size() && xs[split] < cut) ++split;
  if (split < 2) split = xs.size() / 2;
  Trend t;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double& slot = i < split ? t.rest : t.top;
    slot = std::max(slot, std::abs(ys[i]));
  }
  return t;
}

double frac(double t) { return t - std::floor(t); }

// 1. exact reduction identity
void reduction_suite(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> radius(0.5, 6.0);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + i % 4;
    const LatticeBasis g = testing::random_basis(d, rng, 0.3);
    const double T = radius(rng);
    const InductiveReport r = verify_reduction(g, T);
    const double rel = std::abs(r.residual) / (1.0 + r.lhs);
    worst = std::max(worst, rel);
    if (!(rel < 1e-8)) ++failures;
  }
  const double secs = seconds_since(t0);
  o.detail << "200 cases, worst |residual|/(1+N) " << fmt(worst) << ", " << fmt(secs) << " s";
  o.require(failures == 0, std::to_string(failures) + " cases above 1e-8");
  o.require(secs < 30.0, "runtime over 30 s");
}

// 2. inductive identity at every depth
void inductive_suite(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> radius(0.5, 5.0);
  double worst = 0.0;
  int failures = 0;
  int cases = 0;
  for (int d = 2; d <= 4; ++d) {
    for (int k = 1; k <= d - 1; ++k) {
      for (int i = 0; i < 50; ++i) {
        const LatticeBasis g = testing::random_basis(d, rng, 0.3);
        const InductiveReport r = verify_inductive(g, radius(rng), k, {}, default_threads());
        const double rel = std::abs(r.residual) / (1.0 + r.lhs);
        worst = std::max(worst, rel);
        if (!(rel < 1e-5)) ++failures;
        ++cases;
      }
    }
  }
  const double secs = seconds_since(t0);
  o.detail << cases << " cases over 6 (d,k), worst " << fmt(worst) << ", " << fmt(secs) << " s";
  o.require(failures == 0, std::to_string(failures) + " cases above 1e-5");
  o.require(secs < 120.0, "runtime over 2 min");
}

// 3. J_{nu,k} = (2 pi/k) J_{nu-1,k+2}
void recurrence_grid(Outcome& o) {
  double worst = 0.0;
  for (double nu : {1.0, 1.5, 2.0})
    for (int k : {1, 2, 3})
      for (double X : {1.0, 5.0, 20.0}) {
        const double lhs = osc_integral_J(nu, k, X);
        const double rhs = 2.0 * std::numbers::pi / k * osc_integral_J(nu - 1.0, k + 2, X);
        const double scale = 1.0 + std::pow(X, 0.5 * (k + 2.0 * nu - 1.0));
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
      }
  o.detail << "27 grid points, worst scaled gap " << fmt(worst);
  o.require(worst < 1e-8, "gap above 1e-8");
}

// 4. no growth in |J|/X^{(k+2nu-1)/2} and |I_k|/X^{k/2}
void growth_bounds(Outcome& o) {
  const auto xs = log_grid(1.0, 1e3, 50);
  double worst = 0.0;
  std::string where;
  auto check = [&](const std::string& name, const std::function<double(double)>& ratio) {
    std::vector<double> ys;
    for (double X : xs) ys.push_back(ratio(X));
    const Trend t = trend(xs, ys);
    if (t.factor() > worst) {
      worst = t.factor();
      where = name;
    }
  };
  for (double nu : {0.5, 1.0, 1.5, 2.0})
    for (int k : {1, 2, 3}) {
      check("J nu=" + fmt(nu) + " k=" + std::to_string(k), [=](double X) {
        return osc_integral_J(nu, k, X) / std::pow(X, 0.5 * (k + 2.0 * nu - 1.0));
      });
    }
  for (int k = 1; k <= 6; ++k) {
    check("I k=" + std::to_string(k),
          [=](double X) { return osc_integral_I(k, X) / std::pow(X, 0.5 * k); });
  }
  o.detail << "18 families, largest top-decade/below factor " << fmt(worst) << " (" << where
           << ")";
  o.require(worst <= 1.2, "growth above 1.2x");
}

// 5. sum2int error bound, the k = 2 closed form and sharpness
void sum2int_checks(Outcome& o) {
  const auto Ts = log_grid(10.0, 1e5, 400);
  double worst = 0.0;
  for (int k = 1; k <= 6; ++k) {
    double low = 0.0;
    double all = 0.0;
    for (double T : Ts) {
      const double r = std::abs(sum2int_1d(T, k).error) / std::pow(T, 0.5 * k);
      all = std::max(all, r);
      if (T <= 1e3) low = std::max(low, r);
    }
    worst = std::max(worst, all / low);
  }
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> radius(0.5, 2000.0);
  double closed_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double T = radius(rng);
    const double direct = sum2int_1d(T, 2).sum;
    closed_gap = std::max(closed_gap, std::abs(closed_form_k2(T) - direct) / std::abs(direct));
  }
  double sharp = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double T = 1000.0 + (i + 0.5) / 400.0;
    sharp = std::max(sharp, std::abs(sum2int_1d(T, 2).error) / T);
  }
  o.detail << "growth factor " << fmt(worst) << ", closed form rel gap " << fmt(closed_gap)
           << ", k=2 sharpness " << fmt(sharp);
  o.require(worst <= 2.0, "error grows past 2x");
  o.require(closed_gap < 1e-9, "closed form disagrees");
  o.require(sharp >= 0.05, "not sharp");
}

// 6. smoothed lattice sums against the Poisson main term in the plane. The
// remainder is almost periodic in T, so the value at a single radius is a
// phase; each radius is represented by the maximum over [T, T + 10].
void poisson_planar(Outcome& o) {
  std::mt19937_64 rng(606);
  const std::vector<LatticeBasis> bases = {make_lattice(Eigen::MatrixXd::Identity(2, 2)),
                                           testing::random_basis(2, rng, 0.5)};
  const std::vector<double> Ts = {10, 20, 40, 80, 160};
  double worst = 0.0;
  std::ostringstream rows;
  for (std::size_t b = 0; b < bases.size(); ++b) {
    for (int k : {2, 3, 4}) {
      std::vector<double> ys;
      for (double T : Ts) {
        double envelope = 0.0;
        for (int i = 0; i < 1000; ++i) {
          const double t = T + 10.0 * (i + 0.5) / 1000.0;
          const double err = smoothed_sum(bases[b], t, k).value - poisson_main_term(bases[b], t, k);
          envelope = std::max(envelope, std::abs(err) / std::pow(t, 0.5 * (2 + k - 1)));
        }
        ys.push_back(envelope);
      }
      const Trend t = trend(Ts, ys);
      worst = std::max(worst, t.factor());
      rows << (b == 0 ? " Z2" : " rand") << "/k" << k << ":";
      for (std::size_t i = 0; i < ys.size(); ++i) rows << (i ? "," : "") << fmt(ys[i]);
    }
  }
  o.detail << "envelopes" << rows.str() << "; largest top-decade/below factor " << fmt(worst);
  o.require(worst <= 1.2, "growth above 1.2x");
}

// 7. torus averages and mean squares of H; radii as windows [T, T + 10]
void torus_moments(Outcome& o) {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double avg_gap = 0.0;
  for (int dim : {1, 2}) {
    const auto xs = torus_grid(dim, dim == 1 ? 2000 : 200);
    for (int i = 0; i < 10; ++i) {
      const LatticeBasis base = testing::random_basis(dim, rng, 0.5);
      const double lambda = 0.5 + 1.5 * u(rng);
      const double T = 1.0 + 4.0 * u(rng);
      const HValues h = h_values(triangular_form(base), lambda, T, 0, xs);
      double mean = 0.0;
      for (double v : h.values) mean += v;
      mean /= static_cast<double>(h.values.size());
      avg_gap = std::max(avg_gap, std::abs(mean - (1.0 - 2.0 * frac(T / lambda))));
    }
  }
  o.detail << "grid average gap " << fmt(avg_gap);
  o.require(avg_gap <= 5e-2, "average off");

  const std::vector<double> Ts = {5, 10, 20, 40};
  double worst = 0.0;
  for (int dim : {1, 2}) {
    const LatticeBasis base = testing::random_basis(dim, rng, 0.5);
    const double lambda = 0.7 + u(rng);
    for (int j = 0; j <= 2; ++j) {
      std::vector<double> ys;
      for (double T : Ts) {
        // same windowed maximum as for the planar remainder
        double envelope = 0.0;
        for (int w = 0; w < 20; ++w) {
          const double t = T + 10.0 * (w + 0.5) / 20.0;
          MeanSquareOptions opts;
          if (dim == 1) {
            opts.per_dim = 1024;
          } else if (j == 0) {
            opts.per_dim = 32;
          } else {
            opts.rule = TorusRule::monte_carlo;
            opts.samples = 300;
            opts.seed = 7000 + 100 * j + w;
          }
          const double ms = h_mean_square(base, lambda, t, j, opts, default_threads()).value;
          const double n = static_cast<double>(count_points(base, t).count);
          const double scale =
              j == 0 ? n * std::pow(std::log(n), 2) : std::pow(lambda * t, j) * n;
          envelope = std::max(envelope, ms / scale);
        }
        ys.push_back(envelope);
      }
      const Trend t = trend(Ts, ys);
      worst = std::max(worst, t.factor());
      o.detail << (j == 0 && dim == 1 ? ", ratios" : ";") << " d-1=" << dim << "/j" << j << ":";
      for (std::size_t i = 0; i < ys.size(); ++i) o.detail << (i ? "," : "") << fmt(ys[i]);
    }
  }
  o.require(worst <= 1.2, "mean-square ratio grows past 1.2x");
}

// 8. mean square over shears stays within the T^{d-1} log^2 T scale
void full_shear_growth(Outcome& o) {
  const auto t0 = Clock::now();
  const unsigned threads = default_threads();
  {
    const auto Ts = radius_grid(8.0, 128.0, 5);
    const LatticeBasis g = make_lattice(Eigen::MatrixXd::Identity(2, 2));
    const auto est = shear_mean_square(g, 1, Ts, 400, 8001, true, threads);
    const ExponentFit fit = growth_fit(est);
    const double last = est.back().bound_ratio;
    const double prev = est[est.size() - 2].bound_ratio;
    o.detail << "d=2 ratios";
    for (const auto& e : est) o.detail << " " << fmt(e.bound_ratio);
    o.detail << " slope " << fmt(fit.slope);
    o.require(last < 2.0 * prev, "d=2 bound ratio doubles");
    o.require(fit.slope < 1.35, "d=2 slope too steep");
  }
  {
    const auto Ts = radius_grid(6.0, 48.0, 4);
    const LatticeBasis g = make_lattice(Eigen::MatrixXd::Identity(3, 3));
    const auto est = shear_mean_square(g, 1, Ts, 200, 8002, true, threads);
    const ExponentFit fit = growth_fit(est);
    o.detail << "; d=3 ratios";
    for (const auto& e : est) o.detail << " " << fmt(e.bound_ratio);
    o.detail << " slope " << fmt(fit.slope);
    o.require(fit.slope < 2.35, "d=3 slope too steep");
  }
  const double secs = seconds_since(t0);
  o.detail << ", " << fmt(secs) << " s";
  o.require(secs < 600.0, "runtime over 10 min");
}

// 9. the smaller shear family in d = 4
void half_family_growth(Outcome& o) {
  const std::vector<double> Ts = {8.0, 12.0};
  const LatticeBasis g = make_lattice(Eigen::MatrixXd::Identity(4, 4));
  const auto full = shear_mean_square(g, 1, Ts, 200, 9001, true, default_threads());
  const auto half = shear_mean_square(g, 2, Ts, 200, 9002, true, default_threads());
  double worst = 0.0;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    const double a = full[i].bound_ratio;
    const double b = half[i].bound_ratio;
    const double f = std::max(a, b) / std::min(a, b);
    worst = std::max(worst, f);
    o.detail << (i ? ", " : "") << "T=" << fmt(Ts[i]) << " l=1 " << fmt(a) << " l=2 " << fmt(b);
  }
  o.require(worst <= 10.0, "families differ by more than 10x");
}

// 10. shear averages against the one-dimensional prediction
void sharp_average(Outcome& o) {
  const LatticeBasis g = make_lattice((Eigen::MatrixXd(2, 2) << 1.3, 0.2, 0.4, 0.9).finished());
  const auto Ts = radius_grid(10.0, 60.0, 5);
  const auto avg = shear_average(g, Ts, 4000, 10001, AverageRule::monte_carlo, default_threads());
  double worst = 0.0;
  for (const auto& a : avg) {
    worst = std::max(worst, std::abs(a.average - a.prediction_exact) / a.std_error);
  }
  o.detail << "d=2 worst |avg-pred|/SE " << fmt(worst);
  o.require(worst <= 3.0, "d=2 average off by more than 3 SE");

  const LatticeBasis g3 = make_lattice(Eigen::MatrixXd::Identity(3, 3));
  const SharpnessScan scan = sharpness_scan(g3, 50.0, 24, 16, 10002, default_threads());
  o.detail << ", d=3 witness T=" << fmt(scan.witness_T) << " |avg|/T " << fmt(scan.witness_ratio);
  o.require(scan.witness_ratio >= 0.05, "no d=3 witness");
}

// 11. timing on Z^3 and exact agreement with brute force
void performance(Outcome& o) {
  const LatticeBasis z3 = make_lattice(Eigen::MatrixXd::Identity(3, 3));
  const auto t0 = Clock::now();
  const CountResult r = count_points(z3, 200.0, std::min(4u, default_threads()));
  const double secs = seconds_since(t0);
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> radius(0.5, 8.0);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + i % 3;
    const LatticeBasis g = testing::random_basis(d, rng, 0.5);
    const double T = radius(rng);
    if (count_points(g, T).count != testing::brute_count(g, T)) ++mismatches;
  }
  o.detail << "Z3 T=200 count " << r.count << " in " << fmt(secs) << " s, " << mismatches
           << "/200 brute-force mismatches";
  o.require(secs < 5.0, "too slow");
  o.require(mismatches == 0, "brute force disagrees");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria = {
      {"reduction identity", reduction_suite},
      {"inductive identity", inductive_suite},
      {"J recurrence", recurrence_grid},
      {"oscillatory integral growth", growth_bounds},
      {"one-dimensional smoothed sums", sum2int_checks},
      {"planar Poisson remainder", poisson_planar},
      {"torus average and mean square of H", torus_moments},
      {"mean square over all shears", full_shear_growth},
      {"mean square over the l=2 family", half_family_growth},
      {"shear average prediction and sharpness", sharp_average},
      {"performance and brute force", performance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " threw: " << e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
