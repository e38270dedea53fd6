#include "shearcount/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "shearcount/cache.hpp"
#include "shearcount/counting.hpp"
#include "shearcount/decomposition.hpp"
#include "shearcount/errors.hpp"
#include "shearcount/experiments.hpp"
#include "shearcount/oscillatory_sums.hpp"
#include "shearcount/parallel.hpp"
#include "shearcount/special_functions.hpp"

namespace shearcount {

namespace {

// A validation problem tied to one flag.
class FlagError : public Error {
 public:
  FlagError(const std::string& flag, const std::string& what) : Error(flag + ": " + what) {}
};

double parse_real(const std::string& flag, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw FlagError(flag, "expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw FlagError(flag, "expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& flag, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw FlagError(flag, "expected an integer, got '" + text + "'");
  }
  if (used != text.size()) throw FlagError(flag, "expected an integer, got '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::string spaced = text;
  for (char& c : spaced) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream in(spaced);
  std::vector<double> out;
  std::string item;
  while (in >> item) out.push_back(parse_real(flag, item));
  if (out.empty()) throw FlagError(flag, "expected a list of numbers");
  return out;
}

std::vector<double> parse_grid(const std::string& text, bool golden) {
  std::string spec = text;
  if (spec.size() > 3 && spec.substr(spec.size() - 3) == "log") spec.resize(spec.size() - 3);
  if (!spec.empty() && spec.back() == ':') spec.pop_back();
  std::vector<std::string> parts;
  std::stringstream in(spec);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw FlagError("--T-grid", "expected a:b:n");
  const double a = parse_real("--T-grid", parts[0]);
  const double b = parse_real("--T-grid", parts[1]);
  const long long n = parse_integer("--T-grid", parts[2]);
  if (!(a > 0.0) || !(b >= a) || n < 1 || n > 100000) {
    throw FlagError("--T-grid", "need 0 < a <= b and n >= 1");
  }
  return radius_grid(a, b, static_cast<int>(n), golden);
}

double positive(const RunConfig& cfg, const std::string& key) {
  const double v = cfg.real(key);
  if (!(v > 0.0)) throw FlagError("--" + key, "must be > 0");
  return v;
}

int int_at_least(const RunConfig& cfg, const std::string& key, long long low, long long fallback) {
  const long long v = cfg.has(key) ? cfg.integer(key) : fallback;
  if (v < low || v > 1000000000) {
    throw FlagError("--" + key, "must be >= " + std::to_string(low));
  }
  return static_cast<int>(v);
}

LatticeBasis load_basis(const RunConfig& cfg) {
  try {
    return read_basis_file(cfg.at("basis"));
  } catch (const Error& e) {
    throw FlagError("--basis", e.what());
  }
}

// Basis from --basis, or the identity of dimension --d.
LatticeBasis basis_or_identity(const RunConfig& cfg) {
  if (cfg.has("basis")) {
    LatticeBasis g = load_basis(cfg);
    if (cfg.has("d") && cfg.integer("d") != g.dim()) {
      throw FlagError("--d", "does not match the dimension of --basis");
    }
    return g;
  }
  if (!cfg.has("d")) throw FlagError("--d", "required when --basis is absent");
  const int d = int_at_least(cfg, "d", 2, 2);
  if (d > 12) throw FlagError("--d", "must be <= 12");
  return make_lattice(Eigen::MatrixXd::Identity(d, d));
}

std::string csv(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) {
    if (!line.empty()) line += ',';
    line += c;
  }
  return line + '\n';
}

std::string fmt(double v) { return format_real(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

// Real numbers go into JSON through the same 9-digit rendering as CSV so the
// two outputs agree.
nlohmann::json jreal(double v) { return nlohmann::json::parse(format_real(v)); }

struct Sink {
  std::ostream* stream = nullptr;
  std::unique_ptr<std::ofstream> file;
};

Sink open_sink(const RunConfig& cfg, std::ostream& out) {
  Sink s;
  if (cfg.out_path.empty()) {
    s.stream = &out;
    return s;
  }
  s.file = std::make_unique<std::ofstream>(cfg.out_path, std::ios::trunc);
  if (!*s.file) throw FlagError("--out", "cannot open '" + cfg.out_path + "'");
  s.stream = s.file.get();
  return s;
}

void write_gnuplot(const RunConfig& cfg, int x_col, int y_col, const std::string& label) {
  if (!cfg.gnuplot) return;
  if (cfg.out_path.empty()) throw FlagError("--gnuplot", "needs --out");
  std::ofstream gp(cfg.out_path + ".gp", std::ios::trunc);
  if (!gp) throw FlagError("--gnuplot", "cannot write '" + cfg.out_path + ".gp'");
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set logscale xy\n"
     << "set xlabel 'T'\n"
     << "set ylabel '" << label << "'\n"
     << "plot '" << cfg.out_path << "' using " << x_col << ":(abs($" << y_col
     << ")) with linespoints title '" << label << "'\n";
}

void warn_boundary(bool hit, std::ostream& err) {
  if (hit) err << "warning: a lattice point lies within 1e-9 T of the sphere; perturb T\n";
}

int run_count(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const LatticeBasis g = load_basis(cfg);
  const double T = positive(cfg, "radius");
  const int k = cfg.has("smooth") ? int_at_least(cfg, "smooth", 0, 0) : -1;
  const std::string op = k < 0 ? "count" : "smooth" + std::to_string(k);

  auto compute = [&]() -> std::vector<std::uint64_t> {
    if (k < 0) {
      const CountResult r = count_points(g, T, cfg.threads);
      return {r.count, r.boundary_hit ? 1u : 0u};
    }
    const LatticeSum s = smoothed_sum(g, T, k, cfg.threads);
    return {to_word(s.value), s.boundary_hit ? 1u : 0u};
  };
  std::vector<std::uint64_t> words;
  if (cfg.use_cache) {
    ResultCache cache(default_cache_dir(), &err);
    auto found = cache.get_or_compute(CacheKey::make(g, T, op), compute);
    if (found.hit) err << "cache: hit\n";
    words = std::move(found.words);
    if (words.size() != 2) {
      words = compute();
      cache.store(CacheKey::make(g, T, op), words);
    }
  } else {
    words = compute();
  }
  warn_boundary(words[1] != 0, err);

  Sink sink = open_sink(cfg, out);
  if (k < 0) {
    const double main = ball_volume(g.dim(), T) / g.covolume();
    const double rem = static_cast<double>(words[0]) - main;
    if (cfg.format == OutputFormat::json) {
      nlohmann::json j{{"T", jreal(T)},
                       {"count", words[0]},
                       {"main_term", jreal(main)},
                       {"remainder", jreal(rem)}};
      *sink.stream << j.dump() << '\n';
    } else {
      *sink.stream << csv({fmt(T), fmt(words[0]), fmt(main), fmt(rem)});
    }
  } else {
    const double value = from_word(words[0]);
    const double main = poisson_main_term(g, T, k);
    if (cfg.format == OutputFormat::json) {
      nlohmann::json j{{"T", jreal(T)},
                       {"k", k},
                       {"sum", jreal(value)},
                       {"main_term", jreal(main)},
                       {"error", jreal(value - main)}};
      *sink.stream << j.dump() << '\n';
    } else {
      *sink.stream << csv({fmt(T), fmt(value), fmt(main), fmt(value - main)});
    }
  }
  return kExitOk;
}

int run_specfun(const RunConfig& cfg, std::ostream& out) {
  const std::string& mode = cfg.at("mode");
  Sink sink = open_sink(cfg, out);
  auto nonneg = [&](const std::string& key) {
    const double v = cfg.real(key);
    if (!(v >= 0.0)) throw FlagError("--" + key, "must be >= 0");
    return v;
  };
  if (mode == "J") {
    const double nu = nonneg("nu");
    const int k = int_at_least(cfg, "k", 1, 1);
    const double X = nonneg("X");
    *sink.stream << csv({fmt(nu), fmt(k), fmt(X), fmt(osc_integral_J(nu, k, X))});
  } else if (mode == "I") {
    const int k = int_at_least(cfg, "k", 1, 1);
    const double X = nonneg("X");
    *sink.stream << csv({fmt(k), fmt(X), fmt(osc_integral_I(k, X))});
  } else if (mode == "bessel") {
    const double nu = nonneg("nu");
    const double X = nonneg("X");
    *sink.stream << csv({fmt(nu), fmt(X), fmt(bessel_j(nu, X))});
  } else if (mode == "sum2int") {
    const double T = positive(cfg, "T");
    const int k = int_at_least(cfg, "k", 0, 1);
    const Sum2IntResult r = sum2int_1d(T, k);
    *sink.stream << csv({fmt(T), fmt(k), fmt(r.sum), fmt(r.main), fmt(r.error)});
  } else {
    throw FlagError("specfun", "mode must be J, I, bessel or sum2int");
  }
  return kExitOk;
}

int run_hsum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OscSumQuery q;
  q.base = load_basis(cfg);
  q.lambda = positive(cfg, "lambda");
  q.radius = positive(cfg, "T");
  q.smooth_order = int_at_least(cfg, "j", 0, 0);
  const std::vector<double> x = parse_list("--x", cfg.at("x"));
  if (static_cast<int>(x.size()) != q.base.dim()) {
    throw FlagError("--x", "needs " + std::to_string(q.base.dim()) + " entries");
  }
  q.x = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));

  const LatticeSum direct = q.smooth_order == 0 ? h_sum(q, cfg.threads) : h_smoothed(q, {}, cfg.threads);
  warn_boundary(direct.boundary_hit, err);
  Sink sink = open_sink(cfg, out);
  if (!cfg.has("series")) {
    *sink.stream << csv({fmt(q.radius), fmt(q.smooth_order), fmt(direct.value)});
    return kExitOk;
  }
  const int M = int_at_least(cfg, "series", 1, 1);
  if (q.smooth_order == 0) {
    *sink.stream << csv({fmt(q.radius), fmt(0), fmt(direct.value), fmt(h_sum_series(q, M))});
  } else {
    const SeriesValue s = h_smoothed_series(q, M);
    *sink.stream << csv({fmt(q.radius), fmt(q.smooth_order), fmt(direct.value), fmt(s.value),
                         fmt(s.tail_bound)});
  }
  return kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string& mode = cfg.at("mode");
  const LatticeBasis g = load_basis(cfg);
  if (g.dim() < 2) throw FlagError("--basis", "verification needs d >= 2");
  const double T = positive(cfg, "T");
  InductiveReport r;
  if (mode == "reduction") {
    if (cfg.has("k") && cfg.integer("k") != 1) throw FlagError("--k", "reduction is depth 1");
    r = verify_reduction(g, T, cfg.threads);
  } else if (mode == "inductive") {
    const int k = int_at_least(cfg, "k", 1, 1);
    if (k > g.dim() - 1) throw FlagError("--k", "must be <= d-1");
    r = verify_inductive(g, T, k, {}, cfg.threads);
  } else {
    throw FlagError("verify", "mode must be reduction or inductive");
  }
  warn_boundary(r.boundary_hit, err);

  Sink sink = open_sink(cfg, out);
  if (cfg.format == OutputFormat::json) {
    nlohmann::json pieces = nlohmann::json::array();
    pieces.push_back(jreal(r.main_piece));
    for (double p : r.h_pieces) pieces.push_back(jreal(p));
    nlohmann::json j{{"depth", r.depth},
                     {"lhs", jreal(r.lhs)},
                     {"pieces", pieces},
                     {"residual", jreal(r.residual)},
                     {"tolerance", jreal(r.tolerance)},
                     {"pass", r.pass},
                     {"boundary_hit", r.boundary_hit}};
    *sink.stream << j.dump() << '\n';
  } else {
    *sink.stream << csv({fmt(r.depth), fmt(r.lhs), fmt(r.main_piece), fmt(r.residual),
                         fmt(r.tolerance), r.pass ? "true" : "false"});
  }
  if (!r.pass) {
    err << "verify: residual " << format_real(r.residual) << " exceeds tolerance "
        << format_real(r.tolerance) << '\n';
    return kExitContract;
  }
  return kExitOk;
}

const char* kEstimateHeader = "family_d,family_l,T,n_samples,mean,mean_square,std_error,bound_ratio\n";

std::string estimate_row(const MeanSquareEstimate& e) {
  return csv({fmt(e.family_d), fmt(e.family_l), fmt(e.T), fmt(e.samples), fmt(e.mean),
              fmt(e.mean_square), fmt(e.std_error), fmt(e.bound_ratio)});
}

int run_meansquare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const LatticeBasis g = basis_or_identity(cfg);
  const int l = int_at_least(cfg, "l", 1, 1);
  if (l > g.dim() - 1) throw FlagError("--l", "must be <= d-1");
  const int N = int_at_least(cfg, "samples", 2, 100);
  const auto Ts = parse_grid(cfg.at("T-grid"), !cfg.has("no-jitter"));
  const bool strict = !cfg.has("no-strict");
  std::vector<MeanSquareEstimate> est;
  try {
    est = shear_mean_square(g, l, Ts, N, cfg.seed, strict, cfg.threads);
  } catch (const FamilyOutOfRange& e) {
    throw FlagError("--l", std::string(e.what()) + " (use --no-strict to run anyway)");
  }
  Sink sink = open_sink(cfg, out);
  *sink.stream << kEstimateHeader;
  for (const auto& e : est) *sink.stream << estimate_row(e);
  if (est.size() >= 4) {
    const ExponentFit fit = growth_fit(est);
    err << "growth fit: slope " << format_real(fit.slope) << ", r2 " << format_real(fit.r2) << '\n';
  }
  write_gnuplot(cfg, 3, 6, "mean square");
  return kExitOk;
}

int run_sharpness(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const LatticeBasis g = basis_or_identity(cfg);
  const double T0 = positive(cfg, "T0");
  const int steps = int_at_least(cfg, "steps", 1, 20);
  const int N = int_at_least(cfg, "samples", 2, 100);
  const SharpnessScan scan = sharpness_scan(g, T0, steps, N, cfg.seed, cfg.threads);
  Sink sink = open_sink(cfg, out);
  *sink.stream << "family_d,family_l,T,n_samples,average,std_error,prediction,prediction_exact\n";
  for (const auto& r : scan.rows) {
    *sink.stream << csv({fmt(g.dim()), fmt(1), fmt(r.T), fmt(r.samples), fmt(r.average),
                         fmt(r.std_error), fmt(r.prediction), fmt(r.prediction_exact)});
  }
  err << "witness: T " << format_real(scan.witness_T) << ", |average|/T^((d-1)/2) "
      << format_real(scan.witness_ratio) << '\n';
  write_gnuplot(cfg, 3, 5, "shear average");
  return kExitOk;
}

int run_compact(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const int d = int_at_least(cfg, "d", 2, 2);
  if (d > 12) throw FlagError("--d", "must be <= 12");
  std::vector<std::vector<double>> diagonals;
  {
    std::istringstream in(cfg.at("diag"));
    std::string item;
    while (std::getline(in, item, '|')) diagonals.push_back(parse_list("--diag", item));
  }
  const int N = int_at_least(cfg, "samples", 2, 100);
  const auto Ts = parse_grid(cfg.at("T-grid"), !cfg.has("no-jitter"));
  CompactEstimate est;
  try {
    est = compact_set_mean_square(d, diagonals, Ts, N, cfg.seed, cfg.threads);
  } catch (const NotUnimodular& e) {
    throw FlagError("--diag", e.what());
  } catch (const DimMismatch& e) {
    throw FlagError("--diag", e.what());
  }
  Sink sink = open_sink(cfg, out);
  *sink.stream << "slice," << kEstimateHeader;
  for (std::size_t s = 0; s < est.per_slice.size(); ++s) {
    for (const auto& e : est.per_slice[s]) *sink.stream << std::to_string(s) << ',' << estimate_row(e);
  }
  for (std::size_t t = 0; t < Ts.size(); ++t) {
    err << "T " << format_real(Ts[t]) << ": max bound_ratio " << format_real(est.max_bound_ratio[t])
        << '\n';
  }
  write_gnuplot(cfg, 4, 7, "mean square");
  return kExitOk;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::count: return run_count(cfg, out, err);
    case Command::specfun: return run_specfun(cfg, out);
    case Command::hsum: return run_hsum(cfg, out, err);
    case Command::verify: return run_verify(cfg, out, err);
    case Command::meansquare: return run_meansquare(cfg, out, err);
    case Command::sharpness: return run_sharpness(cfg, out, err);
    case Command::compact: return run_compact(cfg, out, err);
  }
  return kExitValidation;
}

}  // namespace

const std::string& RunConfig::at(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw FlagError("--" + key, "is required");
  return it->second;
}

double RunConfig::real(const std::string& key) const { return parse_real("--" + key, at(key)); }

long long RunConfig::integer(const std::string& key) const {
  return parse_integer("--" + key, at(key));
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice point counts of sheared lattices and the oscillatory sums behind them",
               "shearcount"};
  app.require_subcommand(1);

  struct Flag {
    std::string name;
    std::string text;
    CLI::Option* opt = nullptr;
  };
  std::vector<std::unique_ptr<Flag>> flags;
  RunConfig cfg;
  std::string out_path;
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
  bool json = false;
  bool no_cache = false;
  bool gnuplot = false;

  auto add = [&](CLI::App* sub, const std::string& name, const std::string& help, bool required) {
    auto f = std::make_unique<Flag>();
    f->name = name;
    f->opt = sub->add_option("--" + name, f->text, help);
    if (required) f->opt->required();
    flags.push_back(std::move(f));
  };
  auto add_switch = [&](CLI::App* sub, const std::string& name, const std::string& help) {
    auto f = std::make_unique<Flag>();
    f->name = name;
    f->opt = sub->add_flag("--" + name, help);
    flags.push_back(std::move(f));
  };
  auto add_mode = [&](CLI::App* sub, const std::string& help) {
    auto f = std::make_unique<Flag>();
    f->name = "mode";
    f->opt = sub->add_option("mode", f->text, help)->required();
    flags.push_back(std::move(f));
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "write results to this file instead of stdout");
    sub->add_option("--threads", threads, "cap on worker threads")->check(CLI::Range(1u, 1024u));
  };
  auto seeded = [&](CLI::App* sub) { sub->add_option("--seed", seed, "RNG seed (default 0)"); };

  std::map<CLI::App*, Command> commands;
  auto* count = app.add_subcommand("count", "count lattice points in the open ball");
  commands[count] = Command::count;
  add(count, "basis", "basis file", true);
  add(count, "radius", "radius T", true);
  add(count, "smooth", "print sum (T^2-|v|^2)^{k/2} instead of the count", false);
  count->add_flag("--json", json, "emit JSON");
  count->add_flag("--no-cache", no_cache, "bypass the on-disk cache");
  common(count);

  auto* specfun = app.add_subcommand("specfun", "special functions: J, I, bessel, sum2int");
  commands[specfun] = Command::specfun;
  add_mode(specfun, "J | I | bessel | sum2int");
  add(specfun, "nu", "Bessel order", false);
  add(specfun, "k", "weight exponent", false);
  add(specfun, "X", "upper limit or argument", false);
  add(specfun, "T", "radius for sum2int", false);
  common(specfun);

  auto* hsum = app.add_subcommand("hsum", "sawtooth sum H_T and its smoothed versions");
  commands[hsum] = Command::hsum;
  add(hsum, "basis", "base lattice file (dimension d-1)", true);
  add(hsum, "lambda", "fiber spacing lambda", true);
  add(hsum, "x", "shift vector, comma separated", true);
  add(hsum, "T", "radius", true);
  add(hsum, "j", "smoothing order (default 0)", false);
  add(hsum, "series", "also evaluate the Fourier series truncated at M", false);
  common(hsum);

  auto* verify = app.add_subcommand("verify", "check the reduction or inductive identity");
  commands[verify] = Command::verify;
  add_mode(verify, "reduction | inductive");
  add(verify, "basis", "basis file", true);
  add(verify, "T", "radius", true);
  add(verify, "k", "depth for inductive (default 1)", false);
  verify->add_flag("--json", json, "emit JSON");
  common(verify);

  auto* meansquare = app.add_subcommand("meansquare", "mean square of the remainder over shears");
  commands[meansquare] = Command::meansquare;
  add(meansquare, "d", "dimension when --basis is absent", false);
  add(meansquare, "l", "shear family U_{d,l} (default 1)", false);
  add(meansquare, "basis", "basis file (default identity)", false);
  add(meansquare, "T-grid", "radii a:b:n, log spaced", true);
  add(meansquare, "samples", "shears per radius (default 100)", false);
  add_switch(meansquare, "no-strict", "allow l >= 2 without d >= 4 and l <= d/2");
  add_switch(meansquare, "no-jitter", "use the grid radii without golden offsets");
  meansquare->add_flag("--gnuplot", gnuplot, "also write OUT.gp");
  seeded(meansquare);
  common(meansquare);

  auto* sharpness = app.add_subcommand("sharpness", "shear average of the remainder across {T}");
  commands[sharpness] = Command::sharpness;
  add(sharpness, "d", "dimension when --basis is absent", false);
  add(sharpness, "basis", "basis file (default identity)", false);
  add(sharpness, "T0", "integer part of the radii", true);
  add(sharpness, "steps", "fractional steps (default 20)", false);
  add(sharpness, "samples", "shears per radius (default 100)", false);
  sharpness->add_flag("--gnuplot", gnuplot, "also write OUT.gp");
  seeded(sharpness);
  common(sharpness);

  auto* compact = app.add_subcommand("compact", "mean square over diagonal slices diag(a)");
  commands[compact] = Command::compact;
  add(compact, "d", "dimension", true);
  add(compact, "diag", "diagonals, entries comma separated, slices separated by |", true);
  add(compact, "T-grid", "radii a:b:n, log spaced", true);
  add(compact, "samples", "shears per radius (default 100)", false);
  add_switch(compact, "no-jitter", "use the grid radii without golden offsets");
  compact->add_flag("--gnuplot", gnuplot, "also write OUT.gp");
  seeded(compact);
  common(compact);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitValidation;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = commands.at(chosen);
  const auto owned = chosen->get_options();
  for (const auto& f : flags) {
    if (f->opt->count() == 0) continue;
    if (std::find(owned.begin(), owned.end(), f->opt) == owned.end()) continue;
    cfg.params[f->name] = f->text.empty() ? "1" : f->text;
  }
  cfg.seed = seed;
  cfg.out_path = out_path;
  cfg.threads = threads;
  cfg.format = json ? OutputFormat::json : OutputFormat::csv;
  cfg.use_cache = !no_cache;
  cfg.gnuplot = gnuplot;

  try {
    return execute(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    err << chosen->help();
    return kExitValidation;
  }
}

}  // namespace shearcount
