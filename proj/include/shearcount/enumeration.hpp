#pragma once

// Fincke-Pohst style enumeration of { n in Z^d : |n R| < T } for an upper
// triangular R with positive diagonal (rows are basis vectors). Coordinate
// n_0 is outermost; coordinate j contributes to columns j..d-1 only, so the
// partial norm after fixing n_0..n_j is exact for columns 0..j.
//
// Points are never materialized. Consumers are fold-style accumulators:
//
//   struct Acc {
//     void operator()(std::span<const long long> n, double norm2);
//     void merge(const Acc& other);
//   };
//
// Work is split on the outermost coordinate. Each value of n_0 gets its own
// accumulator and the partial results are merged in increasing n_0, so the
// result does not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace shearcount {

struct TriangularForm {
  int dim = 0;
  std::vector<double> r;  // row-major dim x dim, zero below the diagonal

  double at(int i, int j) const { return r[static_cast<std::size_t>(i) * dim + j]; }
};

template <class Acc>
struct FoldResult {
  Acc value;
  bool boundary_hit = false;
};

struct CountTally {
  std::uint64_t count = 0;
  bool boundary_hit = false;
};

namespace detail {

// Relative half-width of the boundary window on |v|, i.e. |v| within
// (T - eps T, T + eps T) raises the boundary flag.
constexpr double kBoundaryEps = 1e-9;

struct EnumState {
  const TriangularForm* tri = nullptr;
  double t2 = 0.0;       // T^2
  double t2_outer = 0.0; // T^2 widened by the boundary window
  std::vector<long long> n;
  std::vector<double> centers;  // centers[level * dim + col] = sum_{i<level} n_i R_{i,col}
  bool boundary_hit = false;

  void note(double norm2) {
    if (std::abs(norm2 - t2) <= 2.0 * kBoundaryEps * t2) boundary_hit = true;
  }

  // Candidate interval for coordinate `level` given the partial norm, padded
  // by one on each side; callers filter with the exact partial norm.
  void range(int level, double partial, long long& lo, long long& hi) const {
    const double rem = t2_outer - partial;
    const double diag = tri->at(level, level);
    const double c = centers[static_cast<std::size_t>(level) * tri->dim + level];
    const double s = std::sqrt(std::max(rem, 0.0));
    lo = static_cast<long long>(std::ceil((-s - c) / diag)) - 1;
    hi = static_cast<long long>(std::floor((s - c) / diag)) + 1;
  }

  double component(int level, long long value) const {
    return centers[static_cast<std::size_t>(level) * tri->dim + level] +
           static_cast<double>(value) * tri->at(level, level);
  }

  void descend(int level, long long value) {
    const int d = tri->dim;
    n[level] = value;
    const std::size_t from = static_cast<std::size_t>(level) * d;
    const std::size_t to = from + d;
    for (int col = level + 1; col < d; ++col) {
      centers[to + col] = centers[from + col] + static_cast<double>(value) * tri->at(level, col);
    }
  }
};

template <class Leaf>
void walk(EnumState& st, int level, double partial, Leaf& leaf) {
  const int d = st.tri->dim;
  long long lo = 0;
  long long hi = 0;
  st.range(level, partial, lo, hi);
  if (level == d - 1) {
    auto norm2_at = [&](long long v) {
      const double comp = st.component(level, v);
      return partial + comp * comp;
    };
    while (lo <= hi && norm2_at(lo) >= st.t2) { st.note(norm2_at(lo)); ++lo; }
    while (hi >= lo && norm2_at(hi) >= st.t2) { st.note(norm2_at(hi)); --hi; }
    if (lo > hi) return;
    st.note(norm2_at(lo));
    st.note(norm2_at(hi));
    leaf.fiber(st, level, partial, lo, hi);
    return;
  }
  for (long long v = lo; v <= hi; ++v) {
    const double comp = st.component(level, v);
    const double p2 = partial + comp * comp;
    if (p2 >= st.t2_outer) continue;
    st.descend(level, v);
    walk(st, level + 1, p2, leaf);
  }
}

template <class Acc>
struct VisitLeaf {
  Acc* acc;
  void fiber(EnumState& st, int level, double partial, long long lo, long long hi) {
    for (long long v = lo; v <= hi; ++v) {
      const double comp = st.component(level, v);
      st.n[level] = v;
      (*acc)(std::span<const long long>(st.n), partial + comp * comp);
    }
  }
};

struct CountLeaf {
  std::uint64_t count = 0;
  void fiber(EnumState&, int, double, long long lo, long long hi) {
    count += static_cast<std::uint64_t>(hi - lo + 1);
  }
};

inline EnumState make_state(const TriangularForm& tri, double T) {
  EnumState st;
  st.tri = &tri;
  st.t2 = T * T;
  st.t2_outer = st.t2 * (1.0 + 4.0 * kBoundaryEps);
  st.n.assign(tri.dim, 0);
  st.centers.assign(static_cast<std::size_t>(tri.dim) * tri.dim, 0.0);
  return st;
}

// Runs `task(index, state)` for every admissible value of n_0, distributing
// indices over up to `threads` workers.
template <class Task>
void for_each_outer(const TriangularForm& tri, double T, unsigned threads, long long& first,
                    std::size_t& slots, Task&& task) {
  EnumState probe = make_state(tri, T);
  long long lo = 0;
  long long hi = 0;
  probe.range(0, 0.0, lo, hi);
  first = lo;
  slots = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
  if (slots == 0) return;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(slots)));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < slots; i = next.fetch_add(1)) task(i);
  };
  if (workers == 1) {
    run();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
}

}  // namespace detail

// Visits every n with |n R| < T.
template <class Acc>
FoldResult<Acc> fold_points(const TriangularForm& tri, double T, const Acc& init,
                            unsigned threads = 1) {
  FoldResult<Acc> out{init, false};
  if (tri.dim == 0 || !(T > 0.0)) return out;
  if (tri.dim == 1) {
    detail::EnumState st = detail::make_state(tri, T);
    detail::VisitLeaf<Acc> leaf{&out.value};
    detail::walk(st, 0, 0.0, leaf);
    out.boundary_hit = st.boundary_hit;
    return out;
  }
  long long first = 0;
  std::size_t slots = 0;
  std::vector<Acc> partials;
  std::vector<char> flags;
  detail::EnumState probe = detail::make_state(tri, T);
  {
    long long lo = 0, hi = 0;
    probe.range(0, 0.0, lo, hi);
    const std::size_t count = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
    partials.assign(count, init);
    flags.assign(count, 0);
  }
  detail::for_each_outer(tri, T, threads, first, slots, [&](std::size_t i) {
    detail::EnumState st = detail::make_state(tri, T);
    const long long v = first + static_cast<long long>(i);
    const double comp = st.component(0, v);
    const double p2 = comp * comp;
    if (p2 >= st.t2_outer) return;
    st.descend(0, v);
    detail::VisitLeaf<Acc> leaf{&partials[i]};
    detail::walk(st, 1, p2, leaf);
    flags[i] = st.boundary_hit ? 1 : 0;
  });
  out.value = init;
  for (std::size_t i = 0; i < partials.size(); ++i) {
    out.value.merge(partials[i]);
    out.boundary_hit = out.boundary_hit || flags[i] != 0;
  }
  return out;
}

// Number of n with |n R| < T; the innermost coordinate is counted as an
// interval instead of point by point.
inline CountTally count_points_raw(const TriangularForm& tri, double T, unsigned threads = 1) {
  CountTally out;
  if (tri.dim == 0 || !(T > 0.0)) return out;
  if (tri.dim == 1) {
    detail::EnumState st = detail::make_state(tri, T);
    detail::CountLeaf leaf;
    detail::walk(st, 0, 0.0, leaf);
    return {leaf.count, st.boundary_hit};
  }
  long long first = 0;
  std::size_t slots = 0;
  detail::EnumState probe = detail::make_state(tri, T);
  long long lo = 0, hi = 0;
  probe.range(0, 0.0, lo, hi);
  const std::size_t count = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
  std::vector<std::uint64_t> partials(count, 0);
  std::vector<char> flags(count, 0);
  detail::for_each_outer(tri, T, threads, first, slots, [&](std::size_t i) {
    detail::EnumState st = detail::make_state(tri, T);
    const long long v = first + static_cast<long long>(i);
    const double comp = st.component(0, v);
    const double p2 = comp * comp;
    if (p2 >= st.t2_outer) return;
    st.descend(0, v);
    detail::CountLeaf leaf;
    detail::walk(st, 1, p2, leaf);
    partials[i] = leaf.count;
    flags[i] = st.boundary_hit ? 1 : 0;
  });
  for (std::size_t i = 0; i < count; ++i) {
    out.count += partials[i];
    out.boundary_hit = out.boundary_hit || flags[i] != 0;
  }
  return out;
}

}  // namespace shearcount
