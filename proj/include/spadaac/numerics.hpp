// Small numerical utilities shared across the library: compensated summation,
// stable log/exp helpers, log-factorial tables, and a counter-based RNG whose
// substreams are reproducible independently of thread scheduling.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace spadaac {

/// Kahan–Neumaier compensated accumulator.
class KahanSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// ln(1 - e^{-x}) for x > 0, accurate near both ends.
inline double log1mexp(double x) {
  constexpr double ln2 = 0.6931471805599453;
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  if (x <= ln2) return std::log(-std::expm1(-x));
  return std::log1p(-std::exp(-x));
}

/// Long-double variant; the extra mantissa keeps PMF entries accurate enough
/// that binomial rows sum to one at the 1e-12 contract even for large gate
/// counts, where ln(k!) magnitudes reach the thousands.
inline long double log1mexp_ld(long double x) {
  constexpr long double ln2 = 0.693147180559945309L;
  if (x <= 0.0L) return -std::numeric_limits<long double>::infinity();
  if (x <= ln2) return logl(-expm1l(-x));
  return log1pl(-expl(-x));
}

/// Cumulative table of ln(k!) for k = 0..n.
inline std::vector<long double> log_factorial_table(int n) {
  std::vector<long double> t(static_cast<std::size_t>(n) + 1, 0.0L);
  for (int k = 2; k <= n; ++k) {
    t[static_cast<std::size_t>(k)] =
        t[static_cast<std::size_t>(k) - 1] + logl(static_cast<long double>(k));
  }
  return t;
}

/// ln C(n, k) from a log-factorial table sized at least n+1.
inline double log_binomial(const std::vector<long double>& lf, int n, int k) {
  return static_cast<double>(lf[static_cast<std::size_t>(n)] -
                             lf[static_cast<std::size_t>(k)] -
                             lf[static_cast<std::size_t>(n - k)]);
}

/// Same difference kept in long double for the PMF builder.
inline long double log_binomial_ld(const std::vector<long double>& lf, int n, int k) {
  return lf[static_cast<std::size_t>(n)] - lf[static_cast<std::size_t>(k)] -
         lf[static_cast<std::size_t>(n - k)];
}

/// 64-bit finalizer with full avalanche (SplitMix64 mixing function).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// SplitMix64 generator. Light, fast, and good enough statistically for
/// Monte Carlo sampling; one instance per trial keeps parallel runs
/// bit-reproducible regardless of scheduling.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Exponential variate with the given rate (rate > 0).
  double next_exponential(double rate) {
    return -std::log1p(-next_double()) / rate;
  }

private:
  std::uint64_t state_;
};

/// Derives the state of an independent substream from a master seed, a
/// stream tag (e.g. purpose or symbol index) and a counter (e.g. trial).
inline std::uint64_t substream_state(std::uint64_t seed, std::uint64_t tag,
                                     std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ tag) ^ counter);
}

/// Runs fn(first, last) over contiguous chunks of [0, n) on `threads` workers
/// (0 = hardware concurrency). The caller is responsible for making chunk
/// results order-independent; histogram merges and indexed writes are.
inline void parallel_chunks(std::size_t n, int threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  std::size_t nt = threads > 0 ? static_cast<std::size_t>(threads) : hw;
  if (nt > n) nt = n == 0 ? 1 : n;
  if (nt <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace spadaac
