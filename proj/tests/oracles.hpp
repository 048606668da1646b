// Test-only oracles, independent of the library's computation paths:
// a factorial permutation-sign enumerator, Gauss-Hermite quadrature for
// Gaussian monomial moments, and a KKT least-squares minimizer over plain
// monomial bases.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "dbarlab/form.hpp"
#include "dbarlab/hermite.hpp"

namespace oracles {

using dbarlab::ComplexRational;
using dbarlab::Coordinate;
using dbarlab::Form;
using dbarlab::Monomial;
using dbarlab::MultiIndex;
using dbarlab::PolyFn;
using dbarlab::Rational;
using dbarlab::WeightSequence;

// ---------------------------------------------------------------------------
// Brute-force permutation sign: enumerate all permutations of `source`
// recursively, tracking parity by explicit transpositions, and return the
// sign of the (unique) permutation that maps source onto target. Returns 0
// when none exists or when source has duplicates.
// ---------------------------------------------------------------------------

inline bool perm_search(std::vector<Coordinate>& cur, std::size_t k,
                        const std::vector<Coordinate>& target, int parity, int& out_sign) {
  if (k == cur.size()) {
    if (cur == target) {
      out_sign = parity;
      return true;
    }
    return false;
  }
  for (std::size_t i = k; i < cur.size(); ++i) {
    std::swap(cur[k], cur[i]);
    const int p = (i == k) ? parity : -parity;
    if (perm_search(cur, k + 1, target, p, out_sign)) return true;
    std::swap(cur[k], cur[i]);
  }
  return false;
}

inline int perm_sign_oracle(std::vector<Coordinate> source, const std::vector<Coordinate>& target) {
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (std::size_t j = i + 1; j < source.size(); ++j) {
      if (source[i] == source[j]) return 0;
    }
  }
  if (source.size() != target.size()) return 0;
  int sign = 0;
  if (!perm_search(source, 0, target, 1, sign)) return 0;
  return sign;
}

// ---------------------------------------------------------------------------
// Gauss-Hermite nodes for the weight exp(-x^2); m nodes integrate
// polynomials of degree <= 2m-1 exactly, which makes the quadrature an exact
// oracle for polynomial Gaussian moments.
// ---------------------------------------------------------------------------

inline std::vector<std::pair<double, double>> gauss_hermite(unsigned m) {
  std::vector<std::pair<double, double>> out(m);
  const double c = std::pow(std::numbers::pi, -0.25);
  for (unsigned i = 0; i < (m + 1) / 2; ++i) {
    double x;
    if (i == 0) {
      x = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      x = out[m - 1].first - 1.14 * std::pow(m, 0.426) / out[m - 1].first;
    } else {
      x = 1.86 * out[m - i].first - 0.86 * out[m - i + 1].first;
    }
    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = c, p2 = 0.0;
      for (unsigned k = 0; k < m; ++k) {
        const double p3 = p2;
        p2 = p1;
        p1 = x * std::sqrt(2.0 / (k + 1.0)) * p2 - std::sqrt(static_cast<double>(k) / (k + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * m) * p2;
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double wgt = 2.0 / (pp * pp);
    out[m - 1 - i] = {x, wgt};
    out[i] = {-x, wgt};
  }
  return out;
}

/// integral of z^p zbar^q against the complex Gaussian of scale a, by tensor
/// Gauss-Hermite in (x, y).
inline std::complex<double> moment_quadrature(unsigned p, unsigned q, double a, unsigned m = 24) {
  const auto nodes = gauss_hermite(m);
  std::complex<double> acc(0.0, 0.0);
  for (const auto& [ux, wx] : nodes) {
    for (const auto& [uy, wy] : nodes) {
      const std::complex<double> z(std::sqrt(2.0) * a * ux, std::sqrt(2.0) * a * uy);
      std::complex<double> v(1.0, 0.0);
      for (unsigned k = 0; k < p; ++k) v *= z;
      for (unsigned k = 0; k < q; ++k) v *= std::conj(z);
      acc += wx * wy * v;
    }
  }
  return acc / std::numbers::pi;
}

/// Joint moment over two independent coordinates; 4-dimensional tensor rule.
inline std::complex<double> joint_moment_quadrature(unsigned p1, unsigned q1, unsigned p2,
                                                    unsigned q2, double a1, double a2,
                                                    unsigned m = 12) {
  const auto nodes = gauss_hermite(m);
  std::complex<double> acc(0.0, 0.0);
  for (const auto& [u1, w1] : nodes) {
    for (const auto& [v1, wv1] : nodes) {
      const std::complex<double> z1(std::sqrt(2.0) * a1 * u1, std::sqrt(2.0) * a1 * v1);
      std::complex<double> f1(1.0, 0.0);
      for (unsigned k = 0; k < p1; ++k) f1 *= z1;
      for (unsigned k = 0; k < q1; ++k) f1 *= std::conj(z1);
      for (const auto& [u2, w2] : nodes) {
        for (const auto& [v2, wv2] : nodes) {
          const std::complex<double> z2(std::sqrt(2.0) * a2 * u2, std::sqrt(2.0) * a2 * v2);
          std::complex<double> f2(1.0, 0.0);
          for (unsigned k = 0; k < p2; ++k) f2 *= z2;
          for (unsigned k = 0; k < q2; ++k) f2 *= std::conj(z2);
          acc += w1 * wv1 * w2 * wv2 * f1 * f2;
        }
      }
    }
  }
  return acc / (std::numbers::pi * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Minimal-norm least squares by Lagrange multipliers over a plain monomial
// basis: minimize u^H G u subject to (dbar u = f), assembled monomial by
// monomial and solved by textbook Gauss-Jordan over complex rationals.
// ---------------------------------------------------------------------------

inline std::optional<std::vector<ComplexRational>> gauss_jordan(
    std::vector<std::vector<ComplexRational>> M, std::vector<ComplexRational> rhs) {
  const std::size_t nr = M.size();
  const std::size_t nc = nr ? M[0].size() : 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t pr = row;
    while (pr < nr && M[pr][col].is_zero()) ++pr;
    if (pr == nr) continue;
    std::swap(M[pr], M[row]);
    std::swap(rhs[pr], rhs[row]);
    for (std::size_t r = 0; r < nr; ++r) {
      if (r == row || M[r][col].is_zero()) continue;
      const ComplexRational f = M[r][col] / M[row][col];
      for (std::size_t c = col; c < nc; ++c) M[r][c] -= f * M[row][c];
      rhs[r] -= f * rhs[row];
    }
    pivots.emplace_back(row, col);
    ++row;
  }
  for (std::size_t r = row; r < nr; ++r) {
    if (!rhs[r].is_zero()) return std::nullopt;
  }
  std::vector<ComplexRational> x(nc);
  for (const auto& [pr, pc] : pivots) x[pc] = rhs[pr] / M[pr][pc];
  return x;
}

inline std::vector<Monomial> monomials_up_to(std::size_t n, unsigned cap) {
  std::vector<Monomial> out;
  std::vector<std::uint32_t> exps(2 * n, 0);
  // odometer over 2n exponent slots with total degree <= cap
  auto emit = [&]() {
    Monomial m;
    for (std::size_t j = 0; j < n; ++j) {
      if (exps[j]) m.z.emplace_back(static_cast<Coordinate>(j + 1), exps[j]);
      if (exps[n + j]) m.zb.emplace_back(static_cast<Coordinate>(j + 1), exps[n + j]);
    }
    out.push_back(std::move(m));
  };
  while (true) {
    unsigned total = 0;
    for (auto e : exps) total += e;
    if (total <= cap) emit();
    std::size_t k = 0;
    while (k < exps.size()) {
      if (++exps[k] > cap) {
        exps[k] = 0;
        ++k;
      } else {
        break;
      }
    }
    if (k == exps.size()) break;
  }
  return out;
}

/// Brute-force minimal-norm solution of dbar u = f with u ranging over all
/// monomials of total degree <= cap in every admissible (I,J) slot.
inline Form kkt_minimal_norm(const Form& f, const WeightSequence& w, unsigned cap) {
  using dbarlab::enumerate_indices;
  const std::size_t s = f.s(), t = f.t() - 1, n = f.n();
  struct Elem {
    Form::Key key;
    Monomial m;
  };
  std::vector<Elem> basis;
  for (const MultiIndex& I : enumerate_indices(s, n)) {
    for (const MultiIndex& J : enumerate_indices(t, n)) {
      for (const Monomial& m : monomials_up_to(n, cap)) {
        basis.push_back(Elem{Form::Key{I, J}, m});
      }
    }
  }
  // constraint rows: every (slot, monomial) hit by dbar of a basis element or by f
  std::map<std::pair<Form::Key, Monomial>, std::size_t> row_of;
  std::vector<std::map<std::size_t, ComplexRational>> cols(basis.size());
  auto row_index = [&](const Form::Key& key, const Monomial& m) {
    return row_of.try_emplace({key, m}, row_of.size()).first->second;
  };
  for (std::size_t c = 0; c < basis.size(); ++c) {
    Form e(s, t, n);
    e.add_term(basis[c].key.first, basis[c].key.second,
               PolyFn::monomial(basis[c].m, ComplexRational(1)));
    const Form de = dbar(e);
    for (const auto& [key, poly] : de.terms()) {
      for (const auto& [m, coef] : poly.terms()) cols[c][row_index(key, m)] = coef;
    }
  }
  for (const auto& [key, poly] : f.terms()) {
    for (const auto& [m, coef] : poly.terms()) row_index(key, m);
  }
  const std::size_t ncols = basis.size();
  const std::size_t nrows = row_of.size();

  // Gram: slots are orthogonal; within a slot use the exact monomial pairing
  const Rational pre = dbarlab::pow_rat(Rational(2), static_cast<unsigned>(s + t));
  std::vector<std::vector<ComplexRational>> K(nrows + ncols,
                                              std::vector<ComplexRational>(nrows + ncols));
  std::vector<ComplexRational> rhs(nrows + ncols);
  for (std::size_t c1 = 0; c1 < ncols; ++c1) {
    for (std::size_t c2 = 0; c2 < ncols; ++c2) {
      if (!(basis[c1].key == basis[c2].key)) continue;
      const Rational aw = pre * dbarlab::weight_aIJ(basis[c1].key.first, basis[c1].key.second, w);
      const ComplexRational g =
          dbarlab::inner(PolyFn::monomial(basis[c2].m, ComplexRational(1)),
                         PolyFn::monomial(basis[c1].m, ComplexRational(1)), w) *
          aw;
      K[c1][c2] = g;  // row c1: sum_c2 G[c1][c2] u_c2 + sum_r conj(A[r][c1]) lambda_r = 0
    }
  }
  for (std::size_t c = 0; c < ncols; ++c) {
    for (const auto& [r, coef] : cols[c]) {
      K[c][ncols + r] = coef.conj();
      K[ncols + r][c] = coef;
    }
  }
  for (const auto& [key_m, r] : row_of) {
    auto it = f.terms().find(key_m.first);
    if (it == f.terms().end()) continue;
    auto jt = it->second.terms().find(key_m.second);
    if (jt != it->second.terms().end()) rhs[ncols + r] = jt->second;
  }
  auto sol = gauss_jordan(std::move(K), std::move(rhs));
  if (!sol) throw dbarlab::Error("kkt oracle: inconsistent system");
  Form u(s, t, n);
  for (std::size_t c = 0; c < ncols; ++c) {
    if ((*sol)[c].is_zero()) continue;
    u.add_term(basis[c].key.first, basis[c].key.second, PolyFn::monomial(basis[c].m, (*sol)[c]));
  }
  return u;
}

}  // namespace oracles
