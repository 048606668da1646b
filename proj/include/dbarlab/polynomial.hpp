// Exact polynomial algebra in z_1..z_n, zbar_1..zbar_n over complex rationals:
// ring operations, Wirtinger derivatives, the first-order operator
// delta_j = d/dz_j - zbar_j/(2 a_j^2), and the Gaussian inner product.
#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dbarlab/errors.hpp"
#include "dbarlab/multiindex.hpp"
#include "dbarlab/rational.hpp"
#include "dbarlab/weights.hpp"

namespace dbarlab {

/// Sparse exponent vector: (coordinate, exponent) pairs, sorted by coordinate,
/// exponents >= 1.
using ExpVec = std::vector<std::pair<Coordinate, std::uint32_t>>;

inline std::uint32_t exp_of(const ExpVec& v, Coordinate j) {
  for (const auto& [c, e] : v) {
    if (c == j) return e;
    if (c > j) break;
  }
  return 0;
}

inline ExpVec with_exponent(ExpVec v, Coordinate j, std::uint32_t e) {
  auto it = std::lower_bound(v.begin(), v.end(), j,
                             [](const auto& p, Coordinate c) { return p.first < c; });
  if (it != v.end() && it->first == j) {
    if (e == 0) {
      v.erase(it);
    } else {
      it->second = e;
    }
  } else if (e != 0) {
    v.insert(it, {j, e});
  }
  return v;
}

inline std::uint32_t degree_of(const ExpVec& v) {
  std::uint32_t d = 0;
  for (const auto& [c, e] : v) d += e;
  return d;
}

/// Monomial z^alpha zbar^beta.
struct Monomial {
  ExpVec z;   // alpha
  ExpVec zb;  // beta

  std::uint32_t total_degree() const { return degree_of(z) + degree_of(zb); }

  Coordinate max_coord() const {
    Coordinate m = 0;
    if (!z.empty()) m = std::max(m, z.back().first);
    if (!zb.empty()) m = std::max(m, zb.back().first);
    return m;
  }

  bool is_one() const { return z.empty() && zb.empty(); }

  Monomial conj() const { return {zb, z}; }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.z == b.z && a.zb == b.zb;
  }
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.z != b.z) return a.z < b.z;
    return a.zb < b.zb;
  }
};

namespace detail {

/// Sorted union of the coordinates touched by two monomials.
inline std::vector<Coordinate> touched_coords(const Monomial& a, const Monomial& b) {
  std::vector<Coordinate> out;
  for (const auto& [c, e] : a.z) out.push_back(c);
  for (const auto& [c, e] : a.zb) out.push_back(c);
  for (const auto& [c, e] : b.z) out.push_back(c);
  for (const auto& [c, e] : b.zb) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// <z^a zbar^b, z^g zbar^d> = prod_j [a_j + d_j = b_j + g_j] (a_j+d_j)! sigma_j^(a_j+d_j).
inline Rational monomial_pairing(const Monomial& f, const Monomial& g, const WeightSequence& w) {
  Rational mom = 1;
  for (Coordinate j : touched_coords(f, g)) {
    const std::uint32_t k = exp_of(f.z, j) + exp_of(g.zb, j);
    if (k != exp_of(f.zb, j) + exp_of(g.z, j)) return Rational(0);
    if (k != 0) mom *= Rational(factorial(k)) * pow_rat(w.sigma(j), k);
  }
  return mom;
}

}  // namespace detail

/// Finitely supported map from monomials to exact complex rational
/// coefficients; zero coefficients are never stored, so structural equality
/// is canonical equality.
class PolyFn {
 public:
  using TermMap = std::map<Monomial, ComplexRational>;

  PolyFn() = default;

  static PolyFn constant(ComplexRational c) {
    PolyFn f;
    f.add_term(Monomial{}, std::move(c));
    return f;
  }
  static PolyFn variable(Coordinate j) {
    PolyFn f;
    f.add_term(Monomial{{{j, 1}}, {}}, ComplexRational(1));
    return f;
  }
  static PolyFn conj_variable(Coordinate j) {
    PolyFn f;
    f.add_term(Monomial{{}, {{j, 1}}}, ComplexRational(1));
    return f;
  }
  static PolyFn monomial(Monomial m, ComplexRational c) {
    PolyFn f;
    f.add_term(std::move(m), std::move(c));
    return f;
  }

  void add_term(Monomial m, ComplexRational c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), std::move(c));
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Coordinate max_coord() const {
    Coordinate m = 0;
    for (const auto& [mono, c] : terms_) m = std::max(m, mono.max_coord());
    return m;
  }

  Coordinate min_coord() const {
    Coordinate m = 0;
    for (const auto& [mono, c] : terms_) {
      for (const auto& [j, e] : mono.z) m = (m == 0) ? j : std::min(m, j);
      for (const auto& [j, e] : mono.zb) m = (m == 0) ? j : std::min(m, j);
    }
    return m;
  }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [mono, c] : terms_) d = std::max(d, mono.total_degree());
    return d;
  }

  PolyFn conj() const {
    PolyFn out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m.conj(), c.conj());
    return out;
  }

  PolyFn& operator+=(const PolyFn& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  PolyFn& operator-=(const PolyFn& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend PolyFn operator+(PolyFn a, const PolyFn& b) { return a += b; }
  friend PolyFn operator-(PolyFn a, const PolyFn& b) { return a -= b; }
  friend PolyFn operator-(const PolyFn& a) {
    PolyFn out;
    for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, -c);
    return out;
  }

  friend PolyFn operator*(const PolyFn& a, const PolyFn& b) {
    PolyFn out;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m;
        m.z = merge_exps(ma.z, mb.z);
        m.zb = merge_exps(ma.zb, mb.zb);
        out.add_term(std::move(m), ca * cb);
      }
    }
    return out;
  }

  PolyFn scaled(const ComplexRational& c) const {
    PolyFn out;
    if (c.is_zero()) return out;
    for (const auto& [m, v] : terms_) out.terms_.emplace(m, v * c);
    return out;
  }

  friend bool operator==(const PolyFn& a, const PolyFn& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const PolyFn& a, const PolyFn& b) { return !(a == b); }

  /// Floating evaluation; conjugates are taken numerically.
  std::complex<double> eval(std::span<const std::complex<double>> point) const {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [m, c] : terms_) {
      std::complex<double> v = c.to_complex();
      for (const auto& [j, e] : m.z) {
        if (j > point.size()) throw DimensionMismatch("eval: coordinate beyond point dimension");
        for (std::uint32_t k = 0; k < e; ++k) v *= point[j - 1];
      }
      for (const auto& [j, e] : m.zb) {
        if (j > point.size()) throw DimensionMismatch("eval: coordinate beyond point dimension");
        const std::complex<double> zb = std::conj(point[j - 1]);
        for (std::uint32_t k = 0; k < e; ++k) v *= zb;
      }
      acc += v;
    }
    return acc;
  }

 private:
  static ExpVec merge_exps(const ExpVec& a, const ExpVec& b) {
    ExpVec out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, k = 0;
    while (i < a.size() && k < b.size()) {
      if (a[i].first < b[k].first) {
        out.push_back(a[i++]);
      } else if (a[i].first > b[k].first) {
        out.push_back(b[k++]);
      } else {
        out.emplace_back(a[i].first, a[i].second + b[k].second);
        ++i;
        ++k;
      }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; k < b.size(); ++k) out.push_back(b[k]);
    return out;
  }

  TermMap terms_;
};

/// d/dz_j (formal Wirtinger derivative on monomials).
inline PolyFn d_z(const PolyFn& f, Coordinate j) {
  PolyFn out;
  for (const auto& [m, c] : f.terms()) {
    const std::uint32_t e = exp_of(m.z, j);
    if (e == 0) continue;
    Monomial d{with_exponent(m.z, j, e - 1), m.zb};
    out.add_term(std::move(d), c * Rational(e));
  }
  return out;
}

/// d/dzbar_j.
inline PolyFn d_zbar(const PolyFn& f, Coordinate j) {
  PolyFn out;
  for (const auto& [m, c] : f.terms()) {
    const std::uint32_t e = exp_of(m.zb, j);
    if (e == 0) continue;
    Monomial d{m.z, with_exponent(m.zb, j, e - 1)};
    out.add_term(std::move(d), c * Rational(e));
  }
  return out;
}

/// Multiplication by zbar_j.
inline PolyFn mul_conj_variable(const PolyFn& f, Coordinate j) {
  PolyFn out;
  for (const auto& [m, c] : f.terms()) {
    Monomial d{m.z, with_exponent(m.zb, j, exp_of(m.zb, j) + 1)};
    out.add_term(std::move(d), c);
  }
  return out;
}

/// delta_j f = df/dz_j - (zbar_j / (2 a_j^2)) f; raises the zbar_j-degree by
/// at most one. Minus the adjoint of d/dzbar_j under the Gaussian inner product.
inline PolyFn delta(const PolyFn& f, Coordinate j, const WeightSequence& w) {
  const Rational inv_sigma = Rational(1) / w.sigma(j);
  PolyFn out = d_z(f, j);
  out -= mul_conj_variable(f, j).scaled(ComplexRational(inv_sigma));
  return out;
}

/// Gaussian inner product <f,g> = integral of f * conj(g); conjugate-linear in g.
inline ComplexRational inner(const PolyFn& f, const PolyFn& g, const WeightSequence& w) {
  ComplexRational acc;
  for (const auto& [mf, cf] : f.terms()) {
    for (const auto& [mg, cg] : g.terms()) {
      Rational mom = detail::monomial_pairing(mf, mg, w);
      if (mom == 0) continue;
      acc += cf * cg.conj() * mom;
    }
  }
  return acc;
}

/// <f,f>, which is real and nonnegative; zero exactly when f = 0.
inline Rational norm_sq(const PolyFn& f, const WeightSequence& w) {
  return inner(f, f, w).re;
}

// ---------------------------------------------------------------------------
// Plain-text syntax. Canonical output looks like
//   (3/4+1/2i) z1^2 zb2 + (-1/8) zb1
// and parsing accepts the same grammar with optional coefficients and signs.
// ---------------------------------------------------------------------------

inline std::string format_complex_rational(const ComplexRational& c) {
  if (c.im == 0) return "(" + format_rational(c.re) + ")";
  if (c.re == 0) return "(" + format_rational(c.im) + "i)";
  if (c.im > 0) return "(" + format_rational(c.re) + "+" + format_rational(c.im) + "i)";
  return "(" + format_rational(c.re) + "-" + format_rational(-c.im) + "i)";
}

inline std::string format_poly(const PolyFn& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    if (!first) out += " + ";
    first = false;
    out += format_complex_rational(c);
    for (const auto& [j, e] : m.z) {
      out += " z" + std::to_string(j);
      if (e > 1) out += "^" + std::to_string(e);
    }
    for (const auto& [j, e] : m.zb) {
      out += " zb" + std::to_string(j);
      if (e > 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

namespace detail {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  PolyFn parse() {
    PolyFn out;
    skip_ws();
    if (done()) throw ParseError("empty polynomial");
    bool negative = consume_sign();
    while (true) {
      out += parse_term(negative);
      skip_ws();
      if (done()) break;
      const char c = peek();
      if (c == '+') {
        ++pos_;
        negative = false;
      } else if (c == '-') {
        ++pos_;
        negative = true;
      } else {
        throw ParseError(err("expected '+' or '-' between terms"));
      }
      skip_ws();
    }
    return out;
  }

 private:
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  std::string err(const std::string& msg) const {
    return "polynomial parse error at offset " + std::to_string(pos_) + ": " + msg;
  }

  bool consume_sign() {
    skip_ws();
    if (!done() && peek() == '-') {
      ++pos_;
      skip_ws();
      return true;
    }
    if (!done() && peek() == '+') {
      ++pos_;
      skip_ws();
    }
    return false;
  }

  Rational parse_unsigned_rational() {
    skip_ws();
    std::size_t start = pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) throw ParseError(err("expected a number"));
    Integer num(std::string(text_.substr(start, pos_ - start)));
    if (!done() && peek() == '/') {
      ++pos_;
      std::size_t dstart = pos_;
      while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (pos_ == dstart) throw ParseError(err("expected a denominator"));
      Integer denize(std::string(text_.substr(dstart, pos_ - dstart)));
      if (denize == 0) throw ParseError(err("zero denominator"));
      return Rational(num, denize);
    }
    return Rational(num);
  }

  /// rational ['i'], or bare 'i'.
  ComplexRational parse_simple(bool negative) {
    skip_ws();
    Rational mag;
    if (!done() && peek() == 'i' && !(pos_ + 1 < text_.size() && is_ident_char(text_[pos_ + 1]))) {
      ++pos_;
      mag = 1;
      ComplexRational c(Rational(0), negative ? -mag : mag);
      return c;
    }
    mag = parse_unsigned_rational();
    if (negative) mag = -mag;
    if (!done() && peek() == 'i') {
      ++pos_;
      return ComplexRational(Rational(0), mag);
    }
    return ComplexRational(mag);
  }

  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  ComplexRational parse_paren_complex() {
    // '(' already consumed
    bool neg = consume_sign();
    ComplexRational c = parse_simple(neg);
    skip_ws();
    while (!done() && (peek() == '+' || peek() == '-')) {
      const bool neg2 = (peek() == '-');
      ++pos_;
      c += parse_simple(neg2);
      skip_ws();
    }
    if (done() || peek() != ')') throw ParseError(err("expected ')'"));
    ++pos_;
    return c;
  }

  PolyFn parse_term(bool negative) {
    skip_ws();
    ComplexRational coef(1);
    bool have_coef = false;
    if (!done() && peek() == '(') {
      ++pos_;
      coef = parse_paren_complex();
      have_coef = true;
    } else if (!done() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                           (peek() == 'i' && !(pos_ + 1 < text_.size() &&
                                               is_ident_char(text_[pos_ + 1]))))) {
      coef = parse_simple(false);
      have_coef = true;
    }
    if (negative) coef = -coef;
    Monomial m;
    bool have_var = false;
    while (true) {
      skip_ws();
      if (done() || peek() != 'z') break;
      ++pos_;
      bool bar = false;
      if (!done() && peek() == 'b') {
        bar = true;
        ++pos_;
      }
      std::size_t start = pos_;
      while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (pos_ == start) throw ParseError(err("expected a coordinate index after z"));
      const auto j = static_cast<Coordinate>(std::stoul(std::string(text_.substr(start, pos_ - start))));
      if (j == 0) throw ParseError(err("coordinate indices are 1-based"));
      std::uint32_t e = 1;
      if (!done() && peek() == '^') {
        ++pos_;
        std::size_t estart = pos_;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (pos_ == estart) throw ParseError(err("expected an exponent after '^'"));
        e = static_cast<std::uint32_t>(std::stoul(std::string(text_.substr(estart, pos_ - estart))));
      }
      ExpVec& side = bar ? m.zb : m.z;
      side = with_exponent(std::move(side), j, exp_of(side, j) + e);
      have_var = true;
    }
    if (!have_coef && !have_var) throw ParseError(err("expected a coefficient or a variable"));
    return PolyFn::monomial(std::move(m), std::move(coef));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline PolyFn parse_poly(std::string_view text) { return detail::PolyParser(text).parse(); }

}  // namespace dbarlab
