// Named reproducible experiments: the exact-identity verification sweep, the
// dimension sweep with its uniform-bound certificates, the singular-data
// example solved through Hermite projection, and Monte Carlo norm checks.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "dbarlab/form.hpp"
#include "dbarlab/gaussian.hpp"
#include "dbarlab/hermite.hpp"
#include "dbarlab/rng.hpp"
#include "dbarlab/solver.hpp"

namespace dbarlab {

struct QuadratureSpec {
  unsigned radial_nodes = 256;
  unsigned angular_nodes = 64;
  Rational cutoff_radius{3, 4};  // r0 in (0,1); the singular data is supported in |z| <= r0
};

struct Tolerances {
  double mc_sigma = 5.0;
  double lempert_rel_residual = 1e-6;
};

struct ExperimentConfig {
  WeightSequence weights = WeightSequence::standard(16);
  std::vector<std::size_t> n_range{1, 2, 3, 4};
  std::size_t s = 0;
  std::size_t t = 0;
  unsigned degree_cap = 4;
  std::uint64_t seed = 20260801;
  std::size_t case_count = 100;
  std::size_t sample_count = 100000;
  QuadratureSpec quadrature;
  Tolerances tolerances;
  unsigned jobs = 1;

  void validate() const {
    if (n_range.empty()) throw ValidationError("experiment.n_range must be nonempty");
    for (std::size_t k = 1; k < n_range.size(); ++k) {
      if (n_range[k] <= n_range[k - 1]) {
        throw ValidationError("experiment.n_range must be strictly increasing");
      }
    }
    if (n_range.front() == 0) throw ValidationError("experiment.n_range entries must be >= 1");
    if (quadrature.cutoff_radius <= 0 || quadrature.cutoff_radius >= 1) {
      throw ValidationError("quadrature.cutoff_radius must lie in (0,1)");
    }
    if (quadrature.radial_nodes < 4 || quadrature.angular_nodes < 4) {
      throw ValidationError("quadrature node counts must be at least 4");
    }
    if (tolerances.mc_sigma <= 0) throw ValidationError("tolerances.mc_sigma must be positive");
    if (tolerances.lempert_rel_residual <= 0) {
      throw ValidationError("tolerances.lempert_rel_residual must be positive");
    }
  }

  std::size_t max_n() const { return n_range.back(); }
};

// ---------------------------------------------------------------------------
// Seeded random polynomial data.
// ---------------------------------------------------------------------------

inline Rational random_small_rational(SplitMix64& rng) {
  Integer num(rng.in_range(-9, 9));
  Integer den(rng.in_range(1, 4));
  return Rational(num, den);
}

inline ComplexRational random_coeff(SplitMix64& rng) {
  ComplexRational c(random_small_rational(rng));
  if (rng.below(2) == 0) c.im = random_small_rational(rng);
  if (c.is_zero()) c.re = 1;
  return c;
}

inline PolyFn random_poly(SplitMix64& rng, std::size_t n, unsigned degree_cap,
                          bool holomorphic = false) {
  PolyFn f;
  const std::size_t terms = 1 + rng.below(3);
  for (std::size_t k = 0; k < terms; ++k) {
    Monomial m;
    const unsigned degree = static_cast<unsigned>(rng.below(degree_cap + 1));
    for (unsigned d = 0; d < degree; ++d) {
      const auto j = static_cast<Coordinate>(1 + rng.below(n));
      ExpVec& side = (!holomorphic && rng.below(2) == 0) ? m.zb : m.z;
      side = with_exponent(std::move(side), j, exp_of(side, j) + 1);
    }
    f.add_term(std::move(m), random_coeff(rng));
  }
  return f;
}

inline Form random_form(SplitMix64& rng, std::size_t s, std::size_t t, std::size_t n,
                        unsigned degree_cap, bool holomorphic = false) {
  Form f(s, t, n);
  const auto Is = enumerate_indices(s, n);
  const auto Js = enumerate_indices(t, n);
  for (const MultiIndex& I : Is) {
    for (const MultiIndex& J : Js) {
      if (rng.below(2) == 0) continue;
      f.add_term(I, J, random_poly(rng, n, degree_cap, holomorphic));
    }
  }
  if (f.is_zero()) {
    f.add_term(Is[rng.below(Is.size())], Js[rng.below(Js.size())],
               random_poly(rng, n, degree_cap, holomorphic));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Truncation: drop coefficient slots with indices beyond n and project each
// remaining coefficient onto the first n coordinates (tail monomial factors
// integrate out to their exact Gaussian moments).
// ---------------------------------------------------------------------------

inline PolyFn project_coords(const PolyFn& f, std::size_t n, const WeightSequence& w) {
  PolyFn out;
  for (const auto& [m, c] : f.terms()) {
    Monomial head;
    ComplexRational coeff = c;
    bool dead = false;
    auto split = [&](const ExpVec& side, bool bar) {
      for (const auto& [j, e] : side) {
        if (j <= n) {
          ExpVec& dst = bar ? head.zb : head.z;
          dst = with_exponent(std::move(dst), j, e);
        }
      }
    };
    split(m.z, false);
    split(m.zb, true);
    // tail factors: coordinate j > n contributes <z^e zbar^eb> under N_{a_j}
    std::map<Coordinate, std::pair<unsigned, unsigned>> tail;
    for (const auto& [j, e] : m.z) {
      if (j > n) tail[j].first = e;
    }
    for (const auto& [j, e] : m.zb) {
      if (j > n) tail[j].second = e;
    }
    for (const auto& [j, pq] : tail) {
      const ComplexRational mom = monomial_moment(pq.first, pq.second, j, w);
      if (mom.is_zero()) {
        dead = true;
        break;
      }
      coeff *= mom;
    }
    if (!dead) out.add_term(std::move(head), std::move(coeff));
  }
  return out;
}

/// M_n: keep slots with max(I u J) <= n and project their coefficients.
inline Form truncate_form(const Form& f, std::size_t n, const WeightSequence& w) {
  Form out(f.s(), f.t(), n);
  for (const auto& [key, poly] : f.terms()) {
    if (std::max(key.first.max(), key.second.max()) > n) continue;
    out.add_term(key.first, key.second, project_coords(poly, n, w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// verify: exact structural identities on seeded random forms.
// ---------------------------------------------------------------------------

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string counterexample;

  PropertyResult() = default;
  explicit PropertyResult(std::string property_name) : name(std::move(property_name)) {}

  bool pass() const { return failures == 0; }

  void record(bool ok, const std::string& dump) {
    ++cases;
    if (!ok) {
      ++failures;
      if (counterexample.empty()) counterexample = dump;
    }
  }
};

struct VerifyReport {
  std::vector<PropertyResult> properties;

  bool all_pass() const {
    for (const auto& p : properties) {
      if (!p.pass()) return false;
    }
    return true;
  }
};

inline VerifyReport verify_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  const WeightSequence w = cfg.weights.extended(cfg.max_n());
  PropertyResult dbar2{"dbar_squared_zero"};
  PropertyResult ibp{"integration_by_parts"};
  PropertyResult comm{"commutator"};
  PropertyResult adj{"adjointness"};
  PropertyResult energy{"energy_identity"};
  PropertyResult basic{"basic_estimate"};
  PropertyResult analytic{"analytic_kernel"};
  PropertyResult sentinel{"closedness_sentinel"};

  for (std::size_t s = 0; s <= 2; ++s) {
    for (std::size_t t = 0; t <= 1; ++t) {
      for (std::size_t n : cfg.n_range) {
        if (n < std::max({s, t + 1, std::size_t{1}})) continue;
        for (std::size_t k = 0; k < cfg.case_count; ++k) {
          const std::uint64_t case_seed =
              mix_seed(cfg.seed, (s * 131 + t * 17 + n) * 1000003 + k);
          SplitMix64 rng(case_seed);

          if (t + 2 <= n) {
            const Form u = random_form(rng, s, t, n, cfg.degree_cap);
            dbar2.record(dbar(dbar(u)).is_zero(), format_form(u));
          }

          {
            const PolyFn phi = random_poly(rng, n, cfg.degree_cap);
            const PolyFn psi = random_poly(rng, n, cfg.degree_cap);
            bool ok = true;
            for (Coordinate j = 1; j <= n && ok; ++j) {
              ok = inner(d_zbar(phi, j), psi, w) == -inner(phi, delta(psi, j, w), w);
            }
            ibp.record(ok, format_poly(phi) + " ; " + format_poly(psi));
            bool cok = true;
            for (Coordinate kk = 1; kk <= n && cok; ++kk) {
              for (Coordinate j = 1; j <= n && cok; ++j) {
                PolyFn lhs = delta(d_zbar(phi, j), kk, w) - d_zbar(delta(phi, kk, w), j);
                PolyFn rhs = (j == kk) ? phi.scaled(ComplexRational(Rational(1) / w.sigma(kk)))
                                       : PolyFn{};
                cok = lhs == rhs;
              }
            }
            comm.record(cok, format_poly(phi));
          }

          if (t + 1 <= n) {
            const Form u = random_form(rng, s, t, n, cfg.degree_cap);
            const Form f = random_form(rng, s, t + 1, n, cfg.degree_cap);
            adj.record(inner_forms(dbar(u), f, w) == inner_forms(u, dbar_adjoint(f, w), w),
                       format_form(u) + " ; " + format_form(f));
            energy.record(energy_identity_defect(f, w) == 0, format_form(f));
            Rational rhs = norm_sq(dbar_adjoint(f, w), w);
            if (f.t() + 1 <= n) rhs += norm_sq(dbar(f), w);
            basic.record(norm_sq(f, w) <= rhs, format_form(f));
          }

          if (t + 1 <= n) {
            const Form h = random_form(rng, s, t, n, cfg.degree_cap, /*holomorphic=*/true);
            analytic.record(dbar(h).is_zero(), format_form(h));
          }
        }
      }
    }
  }

  {
    // known-not-closed probe: zbar_2 dzbar_1 has dbar = -dzbar_1 ^ dzbar_2
    Form probe(0, 1, 2);
    probe.add_term(MultiIndex{}, MultiIndex{1}, PolyFn::conj_variable(2));
    sentinel.record(!check_closed(probe), format_form(probe));
  }

  VerifyReport rep;
  rep.properties = {dbar2, ibp, comm, adj, energy, basic, analytic, sentinel};
  return rep;
}

// ---------------------------------------------------------------------------
// sweep: solve the built-in family f_n = sum_{k<=n} zbar_k dzbar_k at every
// n of the range (the exact squared ratio is 1/2 at each level) and solve
// truncations M_n of a fixed random closed form (closedness is preserved
// exactly and the bound ratio stays <= 1).
// ---------------------------------------------------------------------------

inline Form builtin_sweep_data(std::size_t n) {
  Form f(0, 1, n);
  for (Coordinate k = 1; k <= n; ++k) {
    f.add_term(MultiIndex{}, MultiIndex{k}, PolyFn::conj_variable(k));
  }
  return f;
}

struct SweepRow {
  std::size_t n = 0;
  Rational norm_f_sq{0};
  Rational norm_u_sq{0};
  double ratio = 0.0;       // ||u|| / ||f||
  bool ratio_le_1 = false;  // exact comparison
  bool exact_half = false;  // builtin family: norm_u_sq / norm_f_sq == 1/2 exactly
  bool mn_closed = false;   // truncated family: M_n f in the kernel of the next dbar
};

struct SweepReport {
  std::vector<SweepRow> builtin;
  std::vector<SweepRow> truncated;

  bool all_pass() const {
    for (const auto& r : builtin) {
      if (!r.ratio_le_1 || !r.exact_half) return false;
    }
    for (const auto& r : truncated) {
      if (!r.ratio_le_1 || !r.mn_closed) return false;
    }
    return true;
  }
};

inline SweepReport dimension_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const WeightSequence w = cfg.weights.extended(cfg.max_n());
  SweepReport rep;

  for (std::size_t n : cfg.n_range) {
    const Form f = builtin_sweep_data(n);
    const SolveReport sol = solve_minimal(f, w);
    SweepRow row;
    row.n = n;
    row.norm_f_sq = sol.norm_f_sq;
    row.norm_u_sq = sol.norm_u_sq;
    row.ratio = std::sqrt(to_double(sol.norm_u_sq) / to_double(sol.norm_f_sq));
    row.ratio_le_1 = sol.bound_satisfied;
    row.exact_half = (2 * sol.norm_u_sq == sol.norm_f_sq);
    rep.builtin.push_back(std::move(row));
  }

  const std::size_t n_max = cfg.max_n();
  const std::size_t s = cfg.s, t = cfg.t;
  if (t + 1 <= n_max && s <= n_max) {
    SplitMix64 rng(mix_seed(cfg.seed, 0x5eedULL));
    const Form u_rand = random_form(rng, s, t, n_max, cfg.degree_cap);
    const Form f_full = dbar(u_rand);
    for (std::size_t n : cfg.n_range) {
      if (n < std::max({s, t + 1, std::size_t{1}})) continue;
      const Form mn = truncate_form(f_full, n, w);
      SweepRow row;
      row.n = n;
      row.mn_closed = check_closed(mn);
      if (mn.is_zero()) {
        row.ratio_le_1 = true;
        rep.truncated.push_back(std::move(row));
        continue;
      }
      const SolveReport sol = solve_minimal(mn, w);
      row.norm_f_sq = sol.norm_f_sq;
      row.norm_u_sq = sol.norm_u_sq;
      row.ratio = std::sqrt(to_double(sol.norm_u_sq) / to_double(sol.norm_f_sq));
      row.ratio_le_1 = sol.bound_satisfied;
      rep.truncated.push_back(std::move(row));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Singular closed (0,1)-data sum_k psi(z_k) dzbar_k with
// psi(z) = chi(|z|) z^p / (zbar log|z|^2); chi is a fixed cubic smoothstep
// cutoff, identically 1 on |z| <= 2/3 r0 and 0 from r0 on. Coefficients come
// from a polar tensor quadrature per coordinate; the solve itself is exact.
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on [0,1].
inline std::vector<std::pair<double, double>> gauss_legendre_01(unsigned n) {
  std::vector<std::pair<double, double>> out(n);
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double wgt = 2.0 / ((1.0 - x * x) * pp * pp);
    out[i] = {(1.0 - x) / 2.0, wgt / 2.0};
    out[n - 1 - i] = {(1.0 + x) / 2.0, wgt / 2.0};
  }
  return out;
}

inline double smooth_cutoff(double r, double plateau, double support) {
  if (r <= plateau) return 1.0;
  if (r >= support) return 0.0;
  const double x = (r - plateau) / (support - plateau);
  return 1.0 - x * x * (3.0 - 2.0 * x);
}

/// chi(|z|) z^p / (zbar log|z|^2); zero at the origin and outside |z| < support.
inline std::complex<double> lempert_psi(std::complex<double> z, unsigned p, double plateau,
                                        double support) {
  const double r = std::abs(z);
  if (r == 0.0 || r >= support) return {0.0, 0.0};
  const double chi = smooth_cutoff(r, plateau, support);
  if (chi == 0.0) return {0.0, 0.0};
  std::complex<double> num(1.0, 0.0);
  for (unsigned k = 0; k < p; ++k) num *= z;
  return chi * num / (std::conj(z) * (2.0 * std::log(r)));
}

struct LempertMode {
  unsigned p = 0, q = 0;
  std::complex<double> c;
};

struct LempertCoordinateReport {
  Coordinate k = 0;
  std::vector<LempertMode> modes;  // modes kept after snapping
  double two_grid_error = 0.0;    // L2-normalized disagreement between the two grids
  double psi_norm_sq_quad = 0.0;  // quadrature estimate of ||psi||^2 under this coordinate
  double captured_mass = 0.0;     // sum |c|^2 ||H||^2 over kept modes
  bool diagonal_ok = false;

  double tail_mass() const { return psi_norm_sq_quad - captured_mass; }
};

struct LempertReport {
  unsigned p = 0;
  unsigned cap = 0;
  std::size_t n = 0;
  std::vector<LempertCoordinateReport> coords;
  bool structure_ok = false;
  bool psi_bound_ok = false;
  bool residual_ok = false;
  bool ratio_le_1 = false;
  Rational rel_residual_sq{0};
  Rational norm_u_sq{0};
  Rational norm_f_sq{0};
  double ratio = 0.0;

  bool pass() const { return structure_ok && psi_bound_ok && residual_ok && ratio_le_1; }
};

namespace detail {

struct LempertGridResult {
  std::vector<std::complex<double>> integrals;  // <psi, H_mode> per mode
  double psi_norm_sq = 0.0;
  double bound_excess = 0.0;  // max over nodes of |psi| - |z|^(p-1)
};

inline LempertGridResult lempert_grid(Coordinate k, double a, unsigned p, unsigned R, unsigned A,
                                      double plateau, double support,
                                      const std::vector<PolyFn>& hpolys) {
  LempertGridResult res;
  res.integrals.assign(hpolys.size(), {0.0, 0.0});
  const auto radial = gauss_legendre_01(R);
  std::vector<std::complex<double>> point(k, {0.0, 0.0});
  for (const auto& [x, wx] : radial) {
    const double r = support * x;
    const double wr = support * wx;
    const double gaussw = wr * r * std::exp(-r * r / (2.0 * a * a)) / (a * a * A);
    for (unsigned j = 0; j < A; ++j) {
      const double th = 2.0 * std::numbers::pi * j / A;
      const std::complex<double> z = std::polar(r, th);
      const std::complex<double> pv = lempert_psi(z, p, plateau, support);
      res.psi_norm_sq += gaussw * std::norm(pv);
      if (r > 0.0) {
        const double cap_val = (p >= 1) ? std::pow(r, static_cast<double>(p) - 1.0) : 1.0;
        res.bound_excess = std::max(res.bound_excess, std::abs(pv) - cap_val);
      }
      point[k - 1] = z;
      for (std::size_t m = 0; m < hpolys.size(); ++m) {
        res.integrals[m] += gaussw * pv * std::conj(hpolys[m].eval(point));
      }
    }
  }
  return res;
}

}  // namespace detail

inline LempertReport lempert_example(const ExperimentConfig& cfg, unsigned p) {
  cfg.validate();
  if (p < 1) throw InvalidArg("lempert_example: p must be >= 1");
  const std::size_t n = cfg.max_n();
  const WeightSequence w = cfg.weights.extended(n);
  const unsigned cap = cfg.degree_cap;
  if (cfg.quadrature.angular_nodes <= cap + p + 1) {
    throw InvalidArg("lempert_example: need angular_nodes > cap + p + 1 to avoid aliasing");
  }
  const double support = to_double(cfg.quadrature.cutoff_radius);
  const double plateau = support * 2.0 / 3.0;

  std::vector<std::pair<unsigned, unsigned>> mode_ids;
  for (unsigned pp = 0; pp <= cap; ++pp) {
    for (unsigned qq = 0; pp + qq <= cap; ++qq) mode_ids.emplace_back(pp, qq);
  }

  LempertReport rep;
  rep.p = p;
  rep.cap = cap;
  rep.n = n;
  rep.structure_ok = true;
  rep.psi_bound_ok = true;

  Form f(0, 1, n);
  for (Coordinate k = 1; k <= static_cast<Coordinate>(n); ++k) {
    const double a = to_double(w.a(k));
    std::vector<PolyFn> hpolys;
    std::vector<Rational> hnorms;
    hpolys.reserve(mode_ids.size());
    for (const auto& [pp, qq] : mode_ids) {
      hpolys.push_back(hermite_poly(pp, qq, k, w));
      Bidegree d;
      if (pp) d.z = {{k, pp}};
      if (qq) d.zb = {{k, qq}};
      hnorms.push_back(hermite_norm_sq(d, w));
    }
    const auto coarse = detail::lempert_grid(k, a, p, cfg.quadrature.radial_nodes,
                                             cfg.quadrature.angular_nodes, plateau, support,
                                             hpolys);
    const auto fine = detail::lempert_grid(k, a, p, 2 * cfg.quadrature.radial_nodes,
                                           2 * cfg.quadrature.angular_nodes, plateau, support,
                                           hpolys);
    LempertCoordinateReport crep;
    crep.k = k;
    crep.psi_norm_sq_quad = fine.psi_norm_sq;
    if (fine.bound_excess > 1e-12) rep.psi_bound_ok = false;

    // Coefficients and errors are weighed in the norm they contribute,
    // |c| ||H||, relative to ||psi||; raw coefficient magnitudes vary over
    // many orders because the mode norms do.
    const double psi_l2 = std::sqrt(std::max(fine.psi_norm_sq, 1e-300));
    std::vector<std::complex<double>> coeffs(mode_ids.size());
    double err_sq = 0.0;
    for (std::size_t m = 0; m < mode_ids.size(); ++m) {
      const double hn = to_double(hnorms[m]);
      coeffs[m] = fine.integrals[m] / hn;
      err_sq += std::norm(coarse.integrals[m] / hn - coeffs[m]) * hn;
    }
    crep.two_grid_error = std::sqrt(err_sq) / psi_l2;
    if (crep.two_grid_error > 1e-4) {
      throw QuadratureFailure("lempert_example: coordinate " + std::to_string(k) +
                              " failed the two-grid consistency check (normalized error " +
                              std::to_string(crep.two_grid_error) + ")");
    }

    PolyFn coeff_poly;
    crep.diagonal_ok = true;
    for (std::size_t m = 0; m < mode_ids.size(); ++m) {
      const double hn = to_double(hnorms[m]);
      if (std::abs(coeffs[m]) * std::sqrt(hn) <= 1e-10 * psi_l2) continue;
      const auto& [pp, qq] = mode_ids[m];
      if (static_cast<int>(pp) - static_cast<int>(qq) != static_cast<int>(p) + 1) {
        crep.diagonal_ok = false;
      }
      crep.modes.push_back(LempertMode{pp, qq, coeffs[m]});
      crep.captured_mass += std::norm(coeffs[m]) * hn;
      ComplexRational c(rational_from_double(coeffs[m].real()),
                        rational_from_double(coeffs[m].imag()));
      coeff_poly += hpolys[m].scaled(c);
    }
    if (!crep.diagonal_ok) rep.structure_ok = false;
    rep.coords.push_back(std::move(crep));
    if (!coeff_poly.is_zero()) f.add_term(MultiIndex{}, MultiIndex{k}, coeff_poly);
  }

  const SolveReport sol = solve_minimal(f, w);
  rep.norm_u_sq = sol.norm_u_sq;
  rep.norm_f_sq = sol.norm_f_sq;
  rep.ratio_le_1 = sol.bound_satisfied;
  rep.rel_residual_sq =
      sol.norm_f_sq == 0 ? Rational(0) : sol.residual_norm_sq / sol.norm_f_sq;
  rep.residual_ok = to_double(rep.rel_residual_sq) <=
                    cfg.tolerances.lempert_rel_residual * cfg.tolerances.lempert_rel_residual;
  rep.ratio = sol.norm_f_sq == 0
                  ? 0.0
                  : std::sqrt(to_double(sol.norm_u_sq) / to_double(sol.norm_f_sq));
  return rep;
}

// ---------------------------------------------------------------------------
// mc: the ambient squared norm of a form, estimated by sampling
// |sum' f_IJ(z) wedge(z^1,...)|^2 over independent draws, against the exact
// weighted norm.
// ---------------------------------------------------------------------------

struct McReport {
  double exact = 0.0;
  double empirical = 0.0;
  double stderr_ = 0.0;
  double sigmas = 0.0;
  bool pass = false;
};

inline McReport mc_norm_check(const ExperimentConfig& cfg, const Form& f) {
  cfg.validate();
  if (f.s() + f.t() > 3) throw InvalidArg("mc_norm_check: supported only for s+t <= 3");
  const std::size_t n = f.n();
  const WeightSequence w = cfg.weights.extended(std::max<std::size_t>(n, 1));
  const std::size_t k = f.s() + f.t();
  const std::size_t count = cfg.sample_count;
  McReport rep;
  rep.exact = to_double(norm_sq(f, w));
  if (count == 0) return rep;

  std::vector<double> values(count);
  std::vector<double> sd(n);
  for (std::size_t j = 0; j < n; ++j) sd[j] = to_double(w.a(j + 1));
  for_each_chunk(count, kSampleChunkSize, cfg.jobs,
                 [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                   SplitMix64 rng(mix_seed(cfg.seed, chunk));
                   std::vector<std::vector<std::complex<double>>> args(
                       k, std::vector<std::complex<double>>(n));
                   std::vector<std::complex<double>> z(n);
                   for (std::size_t i = begin; i < end; ++i) {
                     auto draw = [&](std::vector<std::complex<double>>& pt) {
                       for (std::size_t j = 0; j < n; ++j) {
                         const auto [x, y] = rng.next_gauss_pair();
                         pt[j] = {sd[j] * x, sd[j] * y};
                       }
                     };
                     draw(z);
                     for (auto& a : args) draw(a);
                     values[i] = std::norm(eval_form(f, z, args));
                   }
                 });
  detail::RunningStats stats;
  for (double v : values) stats.add(v);
  rep.empirical = stats.mean;
  rep.stderr_ = stats.stderr_of_mean();
  rep.sigmas = rep.stderr_ == 0.0 ? (rep.empirical == rep.exact ? 0.0 : HUGE_VAL)
                                  : std::abs(rep.empirical - rep.exact) / rep.stderr_;
  rep.pass = rep.sigmas <= cfg.tolerances.mc_sigma;
  return rep;
}

}  // namespace dbarlab
