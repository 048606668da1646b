// Exact rational and complex-rational scalars.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "dbarlab/errors.hpp"

namespace dbarlab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Integer factorial(unsigned n) {
  Integer f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

inline Rational pow_rat(const Rational& base, unsigned e) {
  Rational acc = 1;
  Rational b = base;
  while (e != 0) {
    if (e & 1u) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

/// Exact value of a finite double (every finite double is dyadic).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArg("rational_from_double: non-finite value");
  if (x == 0.0) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  Rational r(mant);
  int shift = e - 53;
  if (shift >= 0) {
    r *= pow_rat(Rational(2), static_cast<unsigned>(shift));
  } else {
    r /= pow_rat(Rational(2), static_cast<unsigned>(-shift));
  }
  return r;
}

/// Parses "num", "num/den" or "-num/den"; whitespace around tokens is ignored.
inline Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty rational literal");
  const auto slash = s.find('/');
  auto parse_int = [](const std::string& t) -> Integer {
    if (t.empty() || t == "-" || t == "+") throw ParseError("bad integer literal '" + t + "'");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) {
        throw ParseError("bad integer literal '" + t + "'");
      }
    }
    return Integer(t);
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  const Integer num = parse_int(s.substr(0, slash));
  const Integer den = parse_int(s.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + text + "'");
  return Rational(num, den);
}

/// Short form: omits the denominator when it is 1.
inline std::string format_rational(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Report form: always "num/den".
inline std::string rational_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// Complex number with exact rational real and imaginary parts.
struct ComplexRational {
  Rational re{0};
  Rational im{0};

  ComplexRational() = default;
  ComplexRational(Rational real) : re(std::move(real)) {}  // NOLINT(google-explicit-constructor)
  ComplexRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}
  ComplexRational(int v) : re(v) {}  // NOLINT(google-explicit-constructor)

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  ComplexRational conj() const { return {re, -im}; }
  Rational norm_sq() const { return re * re + im * im; }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o) {
    const Rational nre = re * o.re - im * o.im;
    const Rational nim = re * o.im + im * o.re;
    re = nre;
    im = nim;
    return *this;
  }
  ComplexRational& operator*=(const Rational& c) {
    re *= c;
    im *= c;
    return *this;
  }
  ComplexRational& operator/=(const Rational& c) {
    if (c == 0) throw InvalidArg("division by zero");
    re /= c;
    im /= c;
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator-(ComplexRational a) {
    a.re = -a.re;
    a.im = -a.im;
    return a;
  }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator*(ComplexRational a, const Rational& c) { return a *= c; }
  friend ComplexRational operator*(const Rational& c, ComplexRational a) { return a *= c; }
  friend ComplexRational operator/(ComplexRational a, const Rational& c) { return a /= c; }

  friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
    const Rational n = b.norm_sq();
    if (n == 0) throw InvalidArg("division by zero");
    ComplexRational r = a * b.conj();
    r /= n;
    return r;
  }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }
};

inline ComplexRational conj(const ComplexRational& c) { return c.conj(); }

}  // namespace dbarlab
