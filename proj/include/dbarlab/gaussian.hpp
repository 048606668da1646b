// The product Gaussian measure on truncations: exact monomial moments, a
// deterministic seeded sampler, and Monte Carlo validators for the moment
// and exponential-integrability identities.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "dbarlab/errors.hpp"
#include "dbarlab/multiindex.hpp"
#include "dbarlab/rational.hpp"
#include "dbarlab/rng.hpp"
#include "dbarlab/weights.hpp"

namespace dbarlab {

/// integral of z^p zbar^q over the coordinate-j Gaussian: 0 when p != q,
/// otherwise p! (2 a_j^2)^p.
inline ComplexRational monomial_moment(unsigned p, unsigned q, Coordinate j,
                                       const WeightSequence& w) {
  const Rational sigma = w.sigma(j);  // also validates j
  if (p != q) return ComplexRational(Rational(0));
  return ComplexRational(Rational(factorial(p)) * pow_rat(sigma, p));
}

/// One draw from the truncated measure: Re z_j, Im z_j independent centered
/// Gaussians of standard deviation a_j.
using SamplePoint = std::vector<std::complex<double>>;

/// Deterministic given (n, count, seed): samples are generated in fixed chunks
/// of kSampleChunkSize, each chunk from its own derived stream, so the result
/// is independent of the worker count.
inline std::vector<SamplePoint> sample(std::size_t n, std::size_t count, std::uint64_t seed,
                                       const WeightSequence& w, unsigned jobs = 1) {
  if (n > w.size()) {
    throw IndexOutOfRange("sample: dimension " + std::to_string(n) + " exceeds materialized " +
                          std::to_string(w.size()) + " weights");
  }
  std::vector<double> sd(n);
  for (std::size_t j = 0; j < n; ++j) sd[j] = to_double(w.a(j + 1));
  std::vector<SamplePoint> out(count);
  for_each_chunk(count, kSampleChunkSize, jobs,
                 [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                   SplitMix64 rng(mix_seed(seed, chunk));
                   for (std::size_t i = begin; i < end; ++i) {
                     SamplePoint& pt = out[i];
                     pt.resize(n);
                     for (std::size_t j = 0; j < n; ++j) {
                       const auto [x, y] = rng.next_gauss_pair();
                       pt[j] = {sd[j] * x, sd[j] * y};
                     }
                   }
                 });
  return out;
}

namespace detail {

struct RunningStats {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stderr_of_mean() const {
    return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

}  // namespace detail

struct MomentCheckReport {
  double empirical = 0.0;
  double exact = 0.0;
  double stderr_ = 0.0;

  double sigmas() const {
    if (stderr_ == 0.0) return empirical == exact ? 0.0 : HUGE_VAL;
    return std::abs(empirical - exact) / stderr_;
  }
  bool pass(double k = 5.0) const { return sigmas() <= k; }
};

/// Empirical mean of sum_{i<=n} (|Re z_i|^p + |Im z_i|^p) against the exact
/// value (2^(p/2+1) Gamma((1+p)/2) / sqrt(pi)) * sum_{i<=n} a_i^p.
inline MomentCheckReport moment_sum_check(double p, std::size_t n, std::size_t count,
                                          std::uint64_t seed, const WeightSequence& w,
                                          unsigned jobs = 1) {
  if (p < 1.0) throw InvalidArg("moment_sum_check: p must be >= 1");
  const auto pts = sample(n, count, seed, w, jobs);
  detail::RunningStats stats;
  for (const SamplePoint& pt : pts) {
    double s = 0.0;
    for (const auto& z : pt) {
      s += std::pow(std::abs(z.real()), p) + std::pow(std::abs(z.imag()), p);
    }
    stats.add(s);
  }
  double weight_sum = 0.0;
  for (std::size_t j = 1; j <= n; ++j) weight_sum += std::pow(to_double(w.a(j)), p);
  const double gamma_const =
      std::pow(2.0, p / 2.0 + 1.0) * std::tgamma((1.0 + p) / 2.0) / std::sqrt(std::numbers::pi);
  return {stats.mean, gamma_const * weight_sum, stats.stderr_of_mean()};
}

struct FerniqueReport {
  double empirical = 0.0;
  double bound = 0.0;
  double stderr_ = 0.0;
  bool pass = false;
};

/// Empirical mean of exp(eps * ||z||_{l1,n}), eps = min(1, 1/phi_norm_bound),
/// against the explicit upper bound exp(sum_{k<=n} (a_k^2 + (2 sqrt 2/sqrt pi) a_k)).
/// The bound dominates the integral for every functional of norm at most
/// phi_norm_bound, since |phi(z)| <= ||phi|| ||z||_{l1}.
inline FerniqueReport fernique_check(const Rational& phi_norm_bound, std::size_t count,
                                     std::uint64_t seed, const WeightSequence& w, std::size_t n,
                                     unsigned jobs = 1) {
  if (phi_norm_bound <= 0) throw InvalidArg("fernique_check: bound must be positive");
  const double eps = std::min(1.0, 1.0 / to_double(phi_norm_bound));
  const auto pts = sample(n, count, seed, w, jobs);
  detail::RunningStats stats;
  for (const SamplePoint& pt : pts) {
    double l1 = 0.0;
    for (const auto& z : pt) l1 += std::abs(z.real()) + std::abs(z.imag());
    stats.add(std::exp(eps * l1));
  }
  double exponent = 0.0;
  const double c = 2.0 * std::sqrt(2.0) / std::sqrt(std::numbers::pi);
  for (std::size_t j = 1; j <= n; ++j) {
    const double aj = to_double(w.a(j));
    exponent += aj * aj + c * aj;
  }
  FerniqueReport rep;
  rep.empirical = stats.mean;
  rep.bound = std::exp(exponent);
  rep.stderr_ = stats.stderr_of_mean();
  rep.pass = rep.empirical <= rep.bound + 5.0 * rep.stderr_;
  return rep;
}

}  // namespace dbarlab
