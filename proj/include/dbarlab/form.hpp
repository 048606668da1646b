// Weighted (s,t)-form spaces at truncation n: the coefficient container, the
// norm sum' 2^(s+t) a^{I,J} ||f_IJ||^2, the operators dbar and its adjoint,
// and the floating wedge evaluation used by Monte Carlo cross-checks.
#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dbarlab/errors.hpp"
#include "dbarlab/multiindex.hpp"
#include "dbarlab/polynomial.hpp"
#include "dbarlab/weights.hpp"

namespace dbarlab {

/// f = sum' f_{I,J} dz^I ^ dzbar^J with polynomial coefficients, |I| = s,
/// |J| = t, all indices <= n. Zero coefficients are never stored.
class Form {
 public:
  using Key = std::pair<MultiIndex, MultiIndex>;
  using CoeffMap = std::map<Key, PolyFn>;

  Form(std::size_t s, std::size_t t, std::size_t n) : s_(s), t_(t), n_(n) {
    if (s + t > 2 * n) {
      throw InvalidArg("form degrees (" + std::to_string(s) + "," + std::to_string(t) +
                       ") need more than " + std::to_string(n) + " coordinates");
    }
  }

  std::size_t s() const { return s_; }
  std::size_t t() const { return t_; }
  std::size_t n() const { return n_; }

  void add_term(const MultiIndex& I, const MultiIndex& J, const PolyFn& poly) {
    if (I.size() != s_ || J.size() != t_) {
      throw ShapeMismatch("coefficient slot (" + I.str() + "," + J.str() +
                          ") does not match degrees (" + std::to_string(s_) + "," +
                          std::to_string(t_) + ")");
    }
    if (std::max(I.max(), J.max()) > n_ || poly.max_coord() > n_) {
      throw IndexOutOfRange("coefficient uses a coordinate beyond truncation n=" +
                            std::to_string(n_));
    }
    if (poly.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(Key{I, J}, poly);
    if (!inserted) {
      it->second += poly;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  const CoeffMap& terms() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  /// The coefficient at (I,J); zero polynomial when the slot is empty.
  PolyFn coeff(const MultiIndex& I, const MultiIndex& J) const {
    auto it = coeffs_.find(Key{I, J});
    return it == coeffs_.end() ? PolyFn{} : it->second;
  }

  Form& operator+=(const Form& o) {
    require_same_shape(o);
    for (const auto& [key, poly] : o.coeffs_) add_term(key.first, key.second, poly);
    return *this;
  }
  Form& operator-=(const Form& o) {
    require_same_shape(o);
    for (const auto& [key, poly] : o.coeffs_) add_term(key.first, key.second, -poly);
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }

  Form scaled(const ComplexRational& c) const {
    Form out(s_, t_, n_);
    if (c.is_zero()) return out;
    for (const auto& [key, poly] : coeffs_) out.coeffs_.emplace(key, poly.scaled(c));
    return out;
  }

  friend bool operator==(const Form& a, const Form& b) {
    return a.s_ == b.s_ && a.t_ == b.t_ && a.n_ == b.n_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

 private:
  void require_same_shape(const Form& o) const {
    if (s_ != o.s_ || t_ != o.t_ || n_ != o.n_) {
      throw ShapeMismatch("form shapes (s,t,n) differ");
    }
  }

  std::size_t s_, t_, n_;
  CoeffMap coeffs_;
};

/// sum' 2^(s+t) a^{I,J} <f_IJ, g_IJ>; conjugate-linear in g.
inline ComplexRational inner_forms(const Form& f, const Form& g, const WeightSequence& w) {
  if (f.s() != g.s() || f.t() != g.t() || f.n() != g.n()) {
    throw ShapeMismatch("inner_forms: shapes differ");
  }
  const Rational pre = pow_rat(Rational(2), static_cast<unsigned>(f.s() + f.t()));
  ComplexRational acc;
  for (const auto& [key, poly] : f.terms()) {
    auto it = g.terms().find(key);
    if (it == g.terms().end()) continue;
    acc += inner(poly, it->second, w) * (pre * weight_aIJ(key.first, key.second, w));
  }
  return acc;
}

/// Exact squared norm; zero exactly when f = 0.
inline Rational norm_sq(const Form& f, const WeightSequence& w) {
  const Rational pre = pow_rat(Rational(2), static_cast<unsigned>(f.s() + f.t()));
  Rational acc = 0;
  for (const auto& [key, poly] : f.terms()) {
    acc += pre * weight_aIJ(key.first, key.second, w) * norm_sq(poly, w);
  }
  return acc;
}

/// dbar f = (-1)^s sum'_{I,M} sum_j sum'_J eps_{j,J}^M (d f_IJ / dzbar_j) dz^I ^ dzbar^M.
/// Output lives in degree (s, t+1).
inline Form dbar(const Form& f) {
  if (f.t() + 1 > f.n()) {
    throw DegreeOverflow("dbar: target degree t+1=" + std::to_string(f.t() + 1) +
                         " exceeds truncation n=" + std::to_string(f.n()));
  }
  Form out(f.s(), f.t() + 1, f.n());
  const bool flip = (f.s() % 2) != 0;
  for (const auto& [key, poly] : f.terms()) {
    const auto& [I, J] = key;
    for (Coordinate j = 1; j <= f.n(); ++j) {
      PolyFn d = d_zbar(poly, j);
      if (d.is_zero()) continue;
      auto ins = insert(j, J);
      if (!ins) continue;
      const bool neg = flip != (ins->sign < 0);
      out.add_term(I, ins->index, neg ? -d : d);
    }
  }
  return out;
}

/// The adjoint of dbar: for f of degree (s,t+1),
/// T* f = (-1)^(s-1) sum'_{I,K} sum_j 2 a_j^2 delta_j(f_{I,jK}) dz^I ^ dzbar^K,
/// where f_{I,jK} = eps_{j,K}^J f_{I,J} for the sorted J = {j} u K.
inline Form dbar_adjoint(const Form& f, const WeightSequence& w) {
  if (f.t() == 0) throw InvalidDegree("dbar_adjoint: input must have t-degree >= 1");
  Form out(f.s(), f.t() - 1, f.n());
  const bool flip = (f.s() % 2) == 0;  // (-1)^(s-1)
  for (const auto& [key, poly] : f.terms()) {
    const auto& [I, J] = key;
    for (Coordinate j : J) {
      const MultiIndex K = J.without(j);
      const int sign = eps_sign(j, K, J);
      PolyFn contrib = delta(poly, j, w).scaled(ComplexRational(w.sigma(j) * Rational(sign)));
      out.add_term(I, K, flip ? -contrib : contrib);
    }
  }
  return out;
}

/// Floating value of (dz^I ^ dzbar^J)(z^1, ..., z^(s+t)) by the explicit
/// permutation sum with the 1/sqrt((s+t)!) normalization. Factorial cost;
/// meant for small s+t only.
inline std::complex<double> eval_wedge(const MultiIndex& I, const MultiIndex& J,
                                       std::span<const std::vector<std::complex<double>>> args) {
  const std::size_t s = I.size(), t = J.size(), k = s + t;
  if (args.size() != k) throw ShapeMismatch("eval_wedge: expected s+t argument vectors");
  if (k == 0) return {1.0, 0.0};
  for (const auto& a : args) {
    const Coordinate need = std::max(I.max(), J.max());
    if (a.size() < need) throw DimensionMismatch("eval_wedge: argument vector too short");
  }
  std::vector<std::size_t> perm(k);
  for (std::size_t i = 0; i < k; ++i) perm[i] = i;
  double fact = 1.0;
  for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
  std::complex<double> acc(0.0, 0.0);
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        if (perm[a] > perm[b]) ++inversions;
      }
    }
    std::complex<double> prod(1.0, 0.0);
    for (std::size_t a = 0; a < s; ++a) prod *= args[perm[a]][I[a] - 1];
    for (std::size_t l = 0; l < t; ++l) prod *= std::conj(args[perm[s + l]][J[l] - 1]);
    acc += (inversions % 2 == 0) ? prod : -prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / std::sqrt(fact);
}

/// The ambient function Sum' f_IJ(z) (dz^I ^ dzbar^J)(z^1,...) at a sample.
inline std::complex<double> eval_form(const Form& f,
                                      const std::vector<std::complex<double>>& z,
                                      std::span<const std::vector<std::complex<double>>> args) {
  std::complex<double> acc(0.0, 0.0);
  for (const auto& [key, poly] : f.terms()) {
    acc += poly.eval(z) * eval_wedge(key.first, key.second, args);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Text literals. One coefficient per line:  [i1,i2|j1,j2] polynomial
// An optional first line "n <int>" pins the truncation dimension; otherwise
// it defaults to the largest coordinate in use. '#' starts a comment.
// ---------------------------------------------------------------------------

inline std::string format_form(const Form& f) {
  std::string out = "n " + std::to_string(f.n()) + "\n";
  for (const auto& [key, poly] : f.terms()) {
    out += "[";
    const auto& [I, J] = key;
    for (std::size_t k = 0; k < I.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(I[k]);
    }
    out += "|";
    for (std::size_t k = 0; k < J.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(J[k]);
    }
    out += "] " + format_poly(poly) + "\n";
  }
  return out;
}

namespace detail {

inline MultiIndex parse_index_list(const std::string& text, const std::string& where) {
  std::vector<Coordinate> entries;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ',' || std::isspace(static_cast<unsigned char>(text[pos])))) ++pos;
    if (pos >= text.size()) break;
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw ParseError("bad multi-index in " + where);
    entries.push_back(static_cast<Coordinate>(std::stoul(text.substr(start, pos - start))));
  }
  try {
    return MultiIndex(std::move(entries));
  } catch (const InvalidArg& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace detail

inline Form parse_form(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool have_n = false;
  struct Entry {
    MultiIndex I, J;
    PolyFn poly;
  };
  std::vector<Entry> entries;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = 0, e = line.size();
    while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    if (b == e) continue;
    const std::string body = line.substr(b, e - b);
    const std::string where = "line " + std::to_string(lineno);
    if (!have_n && body.size() > 1 && body[0] == 'n' &&
        (std::isspace(static_cast<unsigned char>(body[1])) || body[1] == '=')) {
      std::size_t p = 1;
      while (p < body.size() && (std::isspace(static_cast<unsigned char>(body[p])) || body[p] == '=')) ++p;
      n = std::stoul(body.substr(p));
      have_n = true;
      continue;
    }
    if (body.front() != '[') throw ParseError(where + ": expected '[I|J] polynomial'");
    const auto bar = body.find('|');
    const auto close = body.find(']');
    if (bar == std::string::npos || close == std::string::npos || bar > close) {
      throw ParseError(where + ": expected '[I|J] polynomial'");
    }
    Entry entry;
    entry.I = detail::parse_index_list(body.substr(1, bar - 1), where);
    entry.J = detail::parse_index_list(body.substr(bar + 1, close - bar - 1), where);
    try {
      entry.poly = parse_poly(body.substr(close + 1));
    } catch (const ParseError& err) {
      throw ParseError(where + ": " + err.what());
    }
    entries.push_back(std::move(entry));
  }
  if (entries.empty()) throw ParseError("form literal has no coefficient lines");
  const std::size_t s = entries.front().I.size();
  const std::size_t t = entries.front().J.size();
  std::size_t max_coord = 0;
  for (const Entry& entry : entries) {
    if (entry.I.size() != s || entry.J.size() != t) {
      throw ParseError("form literal mixes slot degrees");
    }
    max_coord = std::max<std::size_t>(max_coord, entry.I.max());
    max_coord = std::max<std::size_t>(max_coord, entry.J.max());
    max_coord = std::max<std::size_t>(max_coord, entry.poly.max_coord());
  }
  if (!have_n) n = max_coord;
  Form f(s, t, n);
  for (Entry& entry : entries) f.add_term(entry.I, entry.J, entry.poly);
  return f;
}

}  // namespace dbarlab
