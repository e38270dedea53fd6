#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace shearcount {

enum class Command { count, specfun, hsum, verify, meansquare, sharpness, compact };
enum class OutputFormat { csv, json };

// One parsed invocation. `params` holds every flag the subcommand accepted,
// keyed by its long name without dashes, plus "mode" for positional modes
// (specfun J|I|sum2int|bessel, verify reduction|inductive).
struct RunConfig {
  Command command = Command::count;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::string out_path;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  unsigned threads = 1;
  bool use_cache = true;
  bool gnuplot = false;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  const std::string& at(const std::string& key) const;
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
};

// Exit codes returned by dispatch.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitContract = 2;

// args excludes the program name. Results go to `out` (or --out), usage
// and diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// %.9g
std::string format_real(double v);

}  // namespace shearcount
