// Seeded splittable generator and the fixed chunking policy used by samplers.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <thread>
#include <utility>
#include <vector>

namespace dbarlab {

/// splitmix64; tiny, fast, and fully deterministic across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0,1].
  double next_unit_oc() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform in [0,1).
  double next_unit_co() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, k); k > 0.
  std::uint64_t below(std::uint64_t k) { return next() % k; }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t in_range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// One Box-Muller pair of independent standard normals.
  std::pair<double, double> next_gauss_pair() {
    const double u1 = next_unit_oc();
    const double u2 = next_unit_co();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed; used to split work into chunks whose
/// results do not depend on execution order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL + (salt << 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Fixed chunk size of the sampling policy; part of the determinism contract.
inline constexpr std::size_t kSampleChunkSize = 1024;

/// Runs fn(chunk_index, begin, end) over [0, total) split into fixed chunks.
/// Each chunk writes only to its own slots, so thread count never changes results.
template <class Fn>
void for_each_chunk(std::size_t total, std::size_t chunk_size, unsigned jobs, Fn&& fn) {
  if (total == 0) return;
  const std::size_t chunks = (total + chunk_size - 1) / chunk_size;
  auto run_range = [&](std::size_t c0, std::size_t c1) {
    for (std::size_t c = c0; c < c1; ++c) {
      const std::size_t begin = c * chunk_size;
      const std::size_t end = std::min(total, begin + chunk_size);
      fn(c, begin, end);
    }
  };
  if (jobs <= 1 || chunks <= 1) {
    run_range(0, chunks);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, chunks));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t per = (chunks + workers - 1) / workers;
  for (unsigned t = 0; t < workers; ++t) {
    const std::size_t c0 = t * per;
    const std::size_t c1 = std::min(chunks, c0 + per);
    if (c0 >= c1) break;
    pool.emplace_back(run_range, c0, c1);
  }
  for (auto& th : pool) th.join();
}

}  // namespace dbarlab
