#include "shearcount/decomposition.hpp"

#include <cmath>
#include <future>

#include "shearcount/counting.hpp"
#include "shearcount/errors.hpp"
#include "shearcount/special_functions.hpp"

namespace shearcount {

namespace {

double unit_ball_volume(int d) { return d == 0 ? 1.0 : ball_volume(d, 1.0); }

void require_depth(const IwasawaChain& chain, int k, int lowest) {
  if (k < lowest || k > chain.dim() - 1) {
    throw DomainError("depth k must lie in [" + std::to_string(lowest) + ", d-1]");
  }
}

}  // namespace

double alpha_k(int k) {
  if (k < 2) throw DomainError("alpha_k needs k >= 2");
  return 0.5 * beta_function(1.5, 0.5 * (k - 1));
}

double c_constant(const IwasawaChain& chain, int k) {
  require_depth(chain, k, 1);
  const int d = chain.dim();
  const int m = d - k;
  const double moment = 0.5 * beta_function(0.5 * (m + 2), 0.5 * k);
  return unit_ball_volume(d) * chain.sub_basis(m).covolume() /
         (unit_ball_volume(m) * chain.sub_basis(d).covolume() * moment);
}

double c_constant_recursive(const IwasawaChain& chain, int k) {
  require_depth(chain, k, 0);
  const int d = chain.dim();
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    const double lam = chain.lambda(d - i + 1);
    c = i == 1 ? 2.0 / lam : 2.0 * i * alpha_k(i) * c / lam;
  }
  return c;
}

std::vector<double> c_constants(const IwasawaChain& chain) {
  std::vector<double> out{1.0};
  for (int k = 1; k < chain.dim(); ++k) out.push_back(c_constant(chain, k));
  return out;
}

double inductive_main_term(const IwasawaChain& chain, double T) {
  const int d = chain.dim();
  if (d < 2) throw DomainError("inductive_main_term needs d >= 2");
  return c_constant(chain, d - 1) * 2.0 * unit_moment(d - 1) * std::pow(T, d) /
         (chain.lambda(1) * (d - 1));
}

InductiveReport verify_inductive(const LatticeBasis& g, double T, int k, SmoothingOptions opts,
                                 unsigned threads) {
  if (!(T > 0.0)) throw DomainError("radius must be > 0");
  const int d = g.dim();
  if (d < 2) throw DomainError("the inductive formula needs d >= 2");
  const IwasawaChain chain = iwasawa_chain(g);
  require_depth(chain, k, 1);

  // Every piece is its own enumeration; run them side by side.
  auto lhs_job = std::async(std::launch::async, [&] {
    return count_points(triangular_form(chain), g.covolume(), T, threads);
  });
  auto main_job = std::async(std::launch::async, [&] {
    return smoothed_sum(triangular_form(chain, d - k), T, k, threads);
  });
  std::vector<std::future<HValues>> h_jobs;
  for (int j = 0; j < k; ++j) {
    h_jobs.push_back(std::async(std::launch::async, [&, j] {
      const int base = d - j - 1;
      const std::vector<Eigen::VectorXd> xs{chain.shear_vector(base)};
      return h_values(triangular_form(chain, base), chain.lambda(d - j), T, j, xs, opts, threads);
    }));
  }

  InductiveReport report;
  report.depth = k;
  const CountResult lhs = lhs_job.get();
  const LatticeSum main = main_job.get();
  report.lhs = static_cast<double>(lhs.count);
  report.boundary_hit = lhs.boundary_hit || main.boundary_hit;
  const double ck = k == 1 ? 2.0 / chain.lambda(d) : c_constant(chain, k);
  report.main_piece = ck * main.value / k;
  double total = report.main_piece;
  for (int j = 0; j < k; ++j) {
    const HValues h = h_jobs[j].get();
    const double cj = j == 0 ? 1.0 : c_constant(chain, j);
    report.h_pieces.push_back(cj * h.values[0]);
    report.boundary_hit = report.boundary_hit || h.boundary_hit;
  }
  // Summed in order so the residual does not depend on scheduling.
  for (double piece : report.h_pieces) total += piece;
  report.residual = report.lhs - total;
  report.tolerance = (k == 1 ? 1e-6 : 1e-5) * (1.0 + report.lhs);
  report.pass = std::abs(report.residual) <= report.tolerance;
  return report;
}

InductiveReport verify_reduction(const LatticeBasis& g, double T, unsigned threads) {
  return verify_inductive(g, T, 1, {}, threads);
}

}  // namespace shearcount
