#include "shearcount/cache.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "shearcount/errors.hpp"

namespace shearcount {

namespace {

constexpr std::array<char, 8> kMagic{'S', 'H', 'C', 'O', 'U', 'N', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

void put_le(std::string& buf, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

struct Fnv {
  std::uint64_t h = 1469598103934665603ull;
  void add(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
};

}  // namespace

std::uint64_t to_word(double v) { return std::bit_cast<std::uint64_t>(v); }
double from_word(std::uint64_t w) { return std::bit_cast<double>(w); }

std::uint64_t basis_digest(const LatticeBasis& g) {
  Fnv f;
  f.add(static_cast<std::uint64_t>(g.dim()), 4);
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      // -0.0 and 0.0 describe the same lattice.
      const double v = g.rows()(i, j) == 0.0 ? 0.0 : g.rows()(i, j);
      f.add(to_word(v), 8);
    }
  }
  return f.h;
}

CacheKey CacheKey::make(const LatticeBasis& g, double T, std::string op) {
  if (!(T > 0.0) || !std::isfinite(T) || T > 9e6) throw DomainError("cache key: radius out of range");
  return {basis_digest(g), std::llround(T * 1e12), std::move(op)};
}

std::string CacheKey::file_name() const {
  std::ostringstream name;
  name << std::hex;
  name.width(16);
  name.fill('0');
  name << basis_hash << std::dec << '-' << radius_ticks << '-' << op << ".bin";
  return name.str();
}

ResultCache::ResultCache(std::filesystem::path dir, std::ostream* warn)
    : dir_(std::move(dir)), warn_(warn) {}

std::optional<std::vector<std::uint64_t>> ResultCache::load(const CacheKey& key) const {
  const auto path = dir_ / key.file_name();
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  bool ok = bytes.size() >= 16 && std::memcmp(p, kMagic.data(), kMagic.size()) == 0 &&
            get_le(p + 8, 4) == kVersion;
  std::size_t words = 0;
  if (ok) {
    words = get_le(p + 12, 4);
    ok = bytes.size() == 16 + 8 * words;
  }
  if (!ok) {
    if (warn_) *warn_ << "warning: discarding damaged cache entry " << path.string() << '\n';
    std::error_code ec;
    std::filesystem::remove(path, ec);
    return std::nullopt;
  }
  std::vector<std::uint64_t> out(words);
  for (std::size_t i = 0; i < words; ++i) out[i] = get_le(p + 16 + 8 * i, 8);
  return out;
}

void ResultCache::store(const CacheKey& key, const std::vector<std::uint64_t>& words) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  std::string buf(kMagic.begin(), kMagic.end());
  put_le(buf, kVersion, 4);
  put_le(buf, words.size(), 4);
  for (auto w : words) put_le(buf, w, 8);

  const auto target = dir_ / key.file_name();
  std::random_device rd;
  const auto tmp = dir_ / (key.file_name() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      // Caching is best effort; an unwritable directory only costs speed.
      if (warn_) *warn_ << "warning: cannot write cache directory " << dir_.string() << '\n';
      return;
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) {
      std::filesystem::remove(tmp, ec);
      return;
    }
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

ResultCache::Lookup ResultCache::get_or_compute(
    const CacheKey& key, const std::function<std::vector<std::uint64_t>()>& compute) const {
  if (auto found = load(key)) return {std::move(*found), true};
  Lookup fresh{compute(), false};
  store(key, fresh.words);
  return fresh;
}

std::filesystem::path default_cache_dir() {
  if (const char* dir = std::getenv("SHEARCOUNT_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "shearcount";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "shearcount";
  }
  return ".shearcount_cache";
}

}  // namespace shearcount
