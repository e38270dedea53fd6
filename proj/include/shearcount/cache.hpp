#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shearcount/lattice.hpp"

namespace shearcount {

// Identifies one cached result: FNV-1a digest of the basis (dimension and
// the little-endian bytes of its entries), the radius rounded to a multiple
// of 1e-12, and an operation tag such as "count" or "smooth3".
struct CacheKey {
  std::uint64_t basis_hash = 0;
  std::int64_t radius_ticks = 0;
  std::string op;

  static CacheKey make(const LatticeBasis& g, double T, std::string op);
  std::string file_name() const;
  bool operator==(const CacheKey&) const = default;
};

std::uint64_t basis_digest(const LatticeBasis& g);

// One file per key: a 16-byte header (8-byte magic, u32 version, u32 word
// count) followed by little-endian 64-bit words. Writes go to a temporary
// file that is renamed into place.
class ResultCache {
 public:
  // `warn` receives a line whenever a damaged entry is discarded.
  explicit ResultCache(std::filesystem::path dir, std::ostream* warn = nullptr);

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<std::vector<std::uint64_t>> load(const CacheKey& key) const;
  void store(const CacheKey& key, const std::vector<std::uint64_t>& words) const;

  struct Lookup {
    std::vector<std::uint64_t> words;
    bool hit = false;
  };
  Lookup get_or_compute(const CacheKey& key,
                        const std::function<std::vector<std::uint64_t>()>& compute) const;

 private:
  std::filesystem::path dir_;
  std::ostream* warn_;
};

// SHEARCOUNT_CACHE_DIR, else $XDG_CACHE_HOME/shearcount, else
// $HOME/.cache/shearcount, else ./.shearcount_cache.
std::filesystem::path default_cache_dir();

std::uint64_t to_word(double v);
double from_word(std::uint64_t w);

}  // namespace shearcount
