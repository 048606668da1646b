// Minimal-norm solution of dbar u = f for closed polynomial forms at a fixed
// truncation. In the tensor Hermite form basis the Gram matrix is diagonal
// with exactly known entries and dbar only lowers one antiholomorphic index,
// so the space splits into small independent blocks; within each block the
// minimal-norm solution of the consistent system comes from exact elimination
// on the diagonally weighted normal equations of the second kind.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbarlab/form.hpp"
#include "dbarlab/hermite.hpp"

namespace dbarlab {

/// Bidegree box for the solution search space. Since d/dzbar lowers each
/// coordinate q-index by exactly one and keeps p-indices, data with
/// per-coordinate bidegrees within (P, Q) always has a solution within
/// (P, Q+1); that is the default box.
struct AnsatzSpec {
  unsigned max_z_degree = 0;
  unsigned max_zbar_degree = 0;
  unsigned retry_limit = 2;

  static AnsatzSpec for_data(const Form& f, const WeightSequence& w) {
    unsigned pz = 0, pzb = 0;
    for (const auto& [key, poly] : f.terms()) {
      const HermiteExpansion e = expand(poly, w);
      for (const auto& [d, c] : e.coeffs()) {
        for (const auto& [j, ex] : d.z) pz = std::max(pz, ex);
        for (const auto& [j, ex] : d.zb) pzb = std::max(pzb, ex);
      }
    }
    return AnsatzSpec{pz, pzb + 1, 2};
  }
};

/// Membership in the kernel of the next dbar. When t+2 exceeds n that
/// operator is the zero map and the check passes vacuously.
inline bool check_closed(const Form& f) {
  if (f.t() + 1 > f.n()) return true;
  return dbar(f).is_zero();
}

struct SolveReport {
  Form u;
  Rational residual_norm_sq{0};
  Rational norm_u_sq{0};
  Rational norm_f_sq{0};
  Rational ortho_defect{0};
  bool bound_satisfied = false;
};

/// Largest |<u, v>|^2 over probe forms v carrying a single holomorphic
/// Hermite coefficient H_{p,0} with total degree within the cap; exact zero
/// certifies orthogonality to the analytic sector up to that cap.
inline Rational ortho_defect(const Form& u, const WeightSequence& w, unsigned degree_cap) {
  const Rational pre = pow_rat(Rational(2), static_cast<unsigned>(u.s() + u.t()));
  Rational best = 0;
  for (const auto& [key, poly] : u.terms()) {
    const Rational aw = pre * weight_aIJ(key.first, key.second, w);
    const HermiteExpansion e = expand(poly, w);
    for (const auto& [d, c] : e.coeffs()) {
      if (!d.zb.empty()) continue;
      if (degree_of(d.z) > degree_cap) continue;
      const Rational v = aw * hermite_norm_sq(d, w);
      const Rational cand = c.norm_sq() * v * v;
      if (cand > best) best = cand;
    }
  }
  return best;
}

/// ||T* f||^2 + ||S f||^2 - (t+1) ||f||^2
///   - 2^(s+t+1) sum' a^{I,K} || dbar f_{I,K} ||^2   (scalar coefficients as
/// (0,1)-forms); exactly zero for every polynomial (s,t+1)-form.
inline Rational energy_identity_defect(const Form& f, const WeightSequence& w) {
  if (f.t() == 0) throw InvalidDegree("energy identity needs an (s,t+1)-form, t+1 >= 1");
  if (f.is_zero()) return Rational(0);
  Rational lhs = norm_sq(dbar_adjoint(f, w), w);
  if (f.t() + 1 <= f.n()) lhs += norm_sq(dbar(f), w);
  Rational rhs = Rational(static_cast<unsigned>(f.t())) * norm_sq(f, w);
  const Rational pre = pow_rat(Rational(2), static_cast<unsigned>(f.s() + f.t()));
  for (const auto& [key, poly] : f.terms()) {
    Form scalar(0, 0, f.n());
    scalar.add_term(MultiIndex{}, MultiIndex{}, poly);
    rhs += pre * weight_aIJ(key.first, key.second, w) * norm_sq(dbar(scalar), w);
  }
  return lhs - rhs;
}

/// True when f is a (0,1)-form whose every coefficient depends on the single
/// coordinate matching its differential index.
inline bool is_coordinate_separable(const Form& f) {
  if (f.s() != 0 || f.t() != 1) return false;
  for (const auto& [key, poly] : f.terms()) {
    const Coordinate k = key.second[0];
    if (poly.max_coord() > k) return false;
    const Coordinate lo = poly.min_coord();
    if (lo != 0 && lo != k) return false;
  }
  return true;
}

namespace detail {

struct BlockKey {
  MultiIndex I;
  ExpVec p;  // holomorphic bidegrees, shared by the whole block
  ExpVec m;  // antiholomorphic weights m_j = q_j + [j in J]

  friend bool operator<(const BlockKey& a, const BlockKey& b) {
    if (a.I != b.I) return a.I < b.I;
    if (a.p != b.p) return a.p < b.p;
    return a.m < b.m;
  }
};

inline ExpVec bump_by_index(ExpVec v, const MultiIndex& J) {
  for (Coordinate j : J) v = with_exponent(std::move(v), j, exp_of(v, j) + 1);
  return v;
}

inline ExpVec drop_by_index(ExpVec v, const MultiIndex& K) {
  for (Coordinate j : K) {
    const std::uint32_t e = exp_of(v, j);
    v = with_exponent(std::move(v), j, e - 1);
  }
  return v;
}

/// Solves the consistent square system B x = b by exact Gauss-Jordan
/// elimination; free variables are set to zero. Returns nothing when the
/// system is inconsistent.
inline std::optional<std::vector<ComplexRational>> solve_consistent(
    std::vector<std::vector<Rational>> B, std::vector<ComplexRational> b) {
  const std::size_t nr = B.size();
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  std::size_t row = 0;
  for (std::size_t col = 0; col < nr && row < nr; ++col) {
    std::size_t pr = row;
    while (pr < nr && B[pr][col] == 0) ++pr;
    if (pr == nr) continue;
    std::swap(B[pr], B[row]);
    std::swap(b[pr], b[row]);
    for (std::size_t r = 0; r < nr; ++r) {
      if (r == row || B[r][col] == 0) continue;
      const Rational factor = B[r][col] / B[row][col];
      for (std::size_t c2 = col; c2 < nr; ++c2) B[r][c2] -= factor * B[row][c2];
      b[r] -= b[row] * factor;
    }
    pivots.emplace_back(row, col);
    ++row;
  }
  for (std::size_t r = row; r < nr; ++r) {
    if (!b[r].is_zero()) return std::nullopt;
  }
  std::vector<ComplexRational> x(nr);
  for (const auto& [pr, pc] : pivots) x[pc] = b[pr] / Rational(B[pr][pc]);
  return x;
}

inline std::vector<std::vector<Coordinate>> combinations(const std::vector<Coordinate>& pool,
                                                         std::size_t card) {
  std::vector<std::vector<Coordinate>> out;
  if (card > pool.size()) return out;
  std::vector<std::size_t> idx(card);
  for (std::size_t k = 0; k < card; ++k) idx[k] = k;
  while (true) {
    std::vector<Coordinate> pick(card);
    for (std::size_t k = 0; k < card; ++k) pick[k] = pool[idx[k]];
    out.push_back(std::move(pick));
    std::size_t k = card;
    while (k > 0 && idx[k - 1] == pool.size() - card + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t l = k; l < card; ++l) idx[l] = idx[l - 1] + 1;
  }
  return out;
}

using UExpansion = std::map<Form::Key, HermiteExpansion::CoeffMap>;

/// One attempt at the block solve under the given bidegree box.
inline std::optional<UExpansion> solve_blocks(
    const std::map<BlockKey, std::map<MultiIndex, ComplexRational>>& blocks, std::size_t s,
    std::size_t t_out, const AnsatzSpec& box, const WeightSequence& w) {
  const int sgn_s = (s % 2 == 0) ? 1 : -1;
  const Rational pre = pow_rat(Rational(2), static_cast<unsigned>(s + t_out));
  UExpansion u;
  for (const auto& [key, rhs] : blocks) {
    bool p_ok = true;
    for (const auto& [j, e] : key.p) {
      if (e > box.max_z_degree) p_ok = false;
    }
    std::vector<Coordinate> msupp;
    msupp.reserve(key.m.size());
    for (const auto& [j, e] : key.m) msupp.push_back(j);

    struct Col {
      MultiIndex K;
      Bidegree d;
      Rational gram;
    };
    std::vector<Col> cols;
    if (p_ok) {
      for (auto& pick : combinations(msupp, t_out)) {
        const MultiIndex K(pick);
        bool ok = true;
        for (const auto& [j, mj] : key.m) {
          const std::uint32_t q = mj - (K.contains(j) ? 1 : 0);
          if (q > box.max_zbar_degree) ok = false;
        }
        if (!ok) continue;
        Bidegree d{key.p, drop_by_index(key.m, K)};
        Rational gram = pre * weight_aIJ(key.I, K, w) * hermite_norm_sq(d, w);
        cols.push_back(Col{K, std::move(d), std::move(gram)});
      }
    }

    const auto row_picks = combinations(msupp, t_out + 1);
    std::map<MultiIndex, std::size_t> row_of;
    std::vector<MultiIndex> rows;
    rows.reserve(row_picks.size());
    for (const auto& pick : row_picks) {
      MultiIndex J(pick);
      row_of.emplace(J, rows.size());
      rows.push_back(std::move(J));
    }

    std::vector<ComplexRational> b(rows.size());
    for (const auto& [J, c] : rhs) b[row_of.at(J)] = c;

    if (cols.empty()) {
      bool all_zero = true;
      for (const auto& c : b) {
        if (!c.is_zero()) all_zero = false;
      }
      if (all_zero) continue;
      return std::nullopt;
    }

    std::vector<std::vector<Rational>> A(rows.size(), std::vector<Rational>(cols.size(), 0));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      for (Coordinate j : msupp) {
        if (cols[c].K.contains(j)) continue;
        const auto ins = insert(j, cols[c].K);
        const std::size_t r = row_of.at(ins->index);
        const Rational mj(exp_of(key.m, j));
        A[r][c] = Rational(sgn_s * ins->sign) * mj;
      }
    }

    // Normal equations of the second kind: B = A G^-1 A^T, then
    // u = G^-1 A^T wvec for any solution of B wvec = b.
    std::vector<std::vector<Rational>> Bmat(rows.size(), std::vector<Rational>(rows.size(), 0));
    for (std::size_t r1 = 0; r1 < rows.size(); ++r1) {
      for (std::size_t r2 = r1; r2 < rows.size(); ++r2) {
        Rational acc = 0;
        for (std::size_t c = 0; c < cols.size(); ++c) {
          if (A[r1][c] == 0 || A[r2][c] == 0) continue;
          acc += A[r1][c] * A[r2][c] / cols[c].gram;
        }
        Bmat[r1][r2] = acc;
        Bmat[r2][r1] = std::move(acc);
      }
    }
    auto wvec = solve_consistent(std::move(Bmat), std::move(b));
    if (!wvec) return std::nullopt;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      ComplexRational acc;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (A[r][c] == 0) continue;
        acc += (*wvec)[r] * A[r][c];
      }
      if (acc.is_zero()) continue;
      acc /= cols[c].gram;
      u[Form::Key{key.I, cols[c].K}][cols[c].d] += acc;
    }
  }
  return u;
}

inline Form assemble(const UExpansion& u, std::size_t s, std::size_t t_out, std::size_t n,
                     const WeightSequence& w) {
  Form out(s, t_out, n);
  for (const auto& [key, coeffs] : u) {
    PolyFn poly;
    for (const auto& [d, c] : coeffs) {
      if (!c.is_zero()) poly += hermite_tensor(d, w).scaled(c);
    }
    out.add_term(key.first, key.second, poly);
  }
  return out;
}

inline SolveReport finish_report(Form u, const Form& f, const WeightSequence& w,
                                 unsigned defect_cap) {
  SolveReport rep{std::move(u)};
  if (!f.is_zero()) {
    rep.residual_norm_sq = norm_sq(dbar(rep.u) - f, w);
  }
  rep.norm_u_sq = norm_sq(rep.u, w);
  rep.norm_f_sq = norm_sq(f, w);
  rep.ortho_defect = ortho_defect(rep.u, w, defect_cap);
  rep.bound_satisfied = rep.norm_u_sq <= rep.norm_f_sq;
  return rep;
}

}  // namespace detail

/// Fast path for coordinate-separable (0,1)-data: per coordinate the solve is
/// the inverse of the lowering map, H_{p,q} -> H_{p,q+1} / (q+1). Each piece
/// carries only q >= 1 modes in its own coordinate, hence is orthogonal to
/// every holomorphic monomial, so this is the minimal-norm solution.
inline SolveReport solve_separable(const Form& f, const WeightSequence& w) {
  if (!is_coordinate_separable(f)) throw InvalidArg("solve_separable: data is not separable");
  if (!check_closed(f)) throw NotClosed("solve data is not closed");
  PolyFn upoly;
  unsigned cap = 0;
  for (const auto& [key, poly] : f.terms()) {
    const Coordinate k = key.second[0];
    const HermiteExpansion e = expand(poly, w);
    for (const auto& [d, c] : e.coeffs()) {
      const unsigned p = exp_of(d.z, k);
      const unsigned q = exp_of(d.zb, k);
      cap = std::max(cap, p);
      upoly += hermite_poly(p, q + 1, k, w).scaled(c / Rational(q + 1));
    }
  }
  Form u(0, 0, f.n());
  u.add_term(MultiIndex{}, MultiIndex{}, upoly);
  SolveReport rep = detail::finish_report(std::move(u), f, w, cap);
  if (rep.residual_norm_sq != 0) {
    throw AnsatzInsufficient("separable solve left a nonzero residual");
  }
  return rep;
}

/// Minimal-norm u with dbar u = f, certified exactly: residual 0, u
/// orthogonal to the analytic sector, and ||u|| <= ||f||.
inline SolveReport solve_minimal(const Form& f, const WeightSequence& w,
                                 std::optional<AnsatzSpec> ansatz = std::nullopt) {
  if (f.t() == 0) throw InvalidDegree("solve data must be an (s,t+1)-form, t+1 >= 1");
  if (!check_closed(f)) {
    throw NotClosed("solve data is not closed: dbar f != 0");
  }
  const std::size_t s = f.s();
  const std::size_t t_out = f.t() - 1;
  if (f.is_zero()) {
    return detail::finish_report(Form(s, t_out, f.n()), f, w, 0);
  }
  if (!ansatz && is_coordinate_separable(f)) {
    return solve_separable(f, w);
  }

  std::map<detail::BlockKey, std::map<MultiIndex, ComplexRational>> blocks;
  unsigned data_pz = 0, data_pzb = 0;
  for (const auto& [key, poly] : f.terms()) {
    const HermiteExpansion e = expand(poly, w);
    for (const auto& [d, c] : e.coeffs()) {
      for (const auto& [j, ex] : d.z) data_pz = std::max(data_pz, ex);
      for (const auto& [j, ex] : d.zb) data_pzb = std::max(data_pzb, ex);
      detail::BlockKey bkey{key.first, d.z, detail::bump_by_index(d.zb, key.second)};
      blocks[std::move(bkey)][key.second] += c;
    }
  }
  AnsatzSpec box = ansatz.value_or(AnsatzSpec{data_pz, data_pzb + 1, 2});

  for (unsigned attempt = 0;; ++attempt) {
    auto u_exp = detail::solve_blocks(blocks, s, t_out, box, w);
    if (u_exp) {
      SolveReport rep = detail::finish_report(detail::assemble(*u_exp, s, t_out, f.n(), w), f, w,
                                              box.max_z_degree);
      if (rep.residual_norm_sq == 0) {
        if (!rep.bound_satisfied) {
          throw Error("solver postcondition violated: ||u|| > ||f|| on exact data");
        }
        return rep;
      }
    }
    if (attempt >= box.retry_limit) {
      throw AnsatzInsufficient(
          "no exact solution within the ansatz after " + std::to_string(attempt) +
          " enlargements; the degree bookkeeping rules this out for closed data");
    }
    ++box.max_z_degree;
    ++box.max_zbar_degree;
  }
}

}  // namespace dbarlab
