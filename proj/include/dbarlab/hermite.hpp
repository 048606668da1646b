// Complex Hermite (Ito) polynomials per coordinate. With sigma_j = 2 a_j^2
// they diagonalize the Gaussian inner product, d/dzbar_j lowers the second
// index and delta_j raises it; this basis is what the solver eliminates in.
#pragma once

#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <utility>

#include "dbarlab/polynomial.hpp"
#include "dbarlab/weights.hpp"

namespace dbarlab {

namespace detail {

struct HermiteKey {
  Rational sigma;
  Coordinate j;
  unsigned p, q;

  friend bool operator<(const HermiteKey& a, const HermiteKey& b) {
    if (a.j != b.j) return a.j < b.j;
    if (a.p != b.p) return a.p < b.p;
    if (a.q != b.q) return a.q < b.q;
    return a.sigma < b.sigma;
  }
};

inline PolyFn hermite_build(unsigned p, unsigned q, Coordinate j, const Rational& sigma);

inline const PolyFn& hermite_cached(unsigned p, unsigned q, Coordinate j, const Rational& sigma) {
  static std::map<HermiteKey, PolyFn> cache;
  static std::shared_mutex mutex;
  const HermiteKey key{sigma, j, p, q};
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  PolyFn h = hermite_build(p, q, j, sigma);
  std::unique_lock lock(mutex);
  return cache.try_emplace(key, std::move(h)).first->second;
}

// H_{0,0} = 1, H_{p+1,q} = z H_{p,q} - sigma q H_{p,q-1},
// H_{p,q+1} = zbar H_{p,q} - sigma p H_{p-1,q}.
inline PolyFn hermite_build(unsigned p, unsigned q, Coordinate j, const Rational& sigma) {
  if (p == 0 && q == 0) return PolyFn::constant(ComplexRational(1));
  if (p > 0) {
    PolyFn h = PolyFn::variable(j) * hermite_cached(p - 1, q, j, sigma);
    if (q > 0) {
      h -= hermite_cached(p - 1, q - 1, j, sigma).scaled(ComplexRational(sigma * Rational(q)));
    }
    return h;
  }
  PolyFn h = PolyFn::conj_variable(j) * hermite_cached(0, q - 1, j, sigma);
  return h;  // p = 0: the lowering term vanishes
}

}  // namespace detail

/// H_{p,q} in the variables z_j, zbar_j; leading term z_j^p zbar_j^q.
inline PolyFn hermite_poly(unsigned p, unsigned q, Coordinate j, const WeightSequence& w) {
  return detail::hermite_cached(p, q, j, w.sigma(j));
}

/// A per-coordinate bidegree vector ((p_j, q_j) per coordinate) is stored as a
/// Monomial: the z part carries the p's and the zb part the q's.
using Bidegree = Monomial;

/// Tensor product prod_j H_{p_j, q_j, j}.
inline PolyFn hermite_tensor(const Bidegree& d, const WeightSequence& w) {
  PolyFn out = PolyFn::constant(ComplexRational(1));
  // coordinates appearing in either part, each contributing one factor
  std::size_t iz = 0, ib = 0;
  while (iz < d.z.size() || ib < d.zb.size()) {
    Coordinate j;
    unsigned p = 0, q = 0;
    if (iz < d.z.size() && (ib >= d.zb.size() || d.z[iz].first <= d.zb[ib].first)) {
      j = d.z[iz].first;
      p = d.z[iz].second;
      ++iz;
      if (ib < d.zb.size() && d.zb[ib].first == j) {
        q = d.zb[ib].second;
        ++ib;
      }
    } else {
      j = d.zb[ib].first;
      q = d.zb[ib].second;
      ++ib;
    }
    out = out * hermite_poly(p, q, j, w);
  }
  return out;
}

/// ||H_d||^2 = prod_j p_j! q_j! sigma_j^(p_j+q_j).
inline Rational hermite_norm_sq(const Bidegree& d, const WeightSequence& w) {
  Rational out = 1;
  for (const auto& [j, p] : d.z) out *= Rational(factorial(p)) * pow_rat(w.sigma(j), p);
  for (const auto& [j, q] : d.zb) out *= Rational(factorial(q)) * pow_rat(w.sigma(j), q);
  return out;
}

/// Coefficients of a polynomial in the tensor Hermite basis.
class HermiteExpansion {
 public:
  using CoeffMap = std::map<Bidegree, ComplexRational>;

  HermiteExpansion(CoeffMap coeffs, WeightSequence w)
      : coeffs_(std::move(coeffs)), w_(std::move(w)) {}

  const CoeffMap& coeffs() const { return coeffs_; }
  const WeightSequence& weights() const { return w_; }

  /// Parseval: <f,f> = sum |coeff|^2 ||H||^2.
  Rational norm_sq() const {
    Rational out = 0;
    for (const auto& [d, c] : coeffs_) out += c.norm_sq() * hermite_norm_sq(d, w_);
    return out;
  }

 private:
  CoeffMap coeffs_;
  WeightSequence w_;
};

/// Exact triangular change of basis. H_d equals its leading monomial plus
/// terms of strictly smaller total degree, so repeatedly stripping the
/// degree-lex leading term terminates.
inline HermiteExpansion expand(const PolyFn& f, const WeightSequence& w) {
  HermiteExpansion::CoeffMap coeffs;
  PolyFn g = f;
  while (!g.is_zero()) {
    auto lead = g.terms().begin();
    for (auto it = std::next(g.terms().begin()); it != g.terms().end(); ++it) {
      const unsigned dl = lead->first.total_degree();
      const unsigned di = it->first.total_degree();
      if (di > dl || (di == dl && lead->first < it->first)) lead = it;
    }
    const Bidegree d = lead->first;
    const ComplexRational c = lead->second;
    coeffs.emplace(d, c);
    g -= hermite_tensor(d, w).scaled(c);
  }
  return HermiteExpansion(std::move(coeffs), w);
}

/// Inverse of expand.
inline PolyFn reconstruct(const HermiteExpansion& e) {
  PolyFn out;
  for (const auto& [d, c] : e.coeffs()) out += hermite_tensor(d, e.weights()).scaled(c);
  return out;
}

}  // namespace dbarlab
