#include <catch2/catch_amalgamated.hpp>

#include "dbarlab/experiments.hpp"
#include "dbarlab/solver.hpp"
#include "oracles.hpp"

using namespace dbarlab;

namespace {
const WeightSequence w8 = WeightSequence::standard(8);

Form zb1_dzb1() {
  Form f(0, 1, 2);
  f.add_term(MultiIndex{}, MultiIndex{1}, PolyFn::conj_variable(1));
  return f;
}
}  // namespace

TEST_CASE("check_closed") {
  CHECK(check_closed(zb1_dzb1()));
  Form bad(0, 1, 2);
  bad.add_term(MultiIndex{}, MultiIndex{1}, PolyFn::conj_variable(2));
  CHECK_FALSE(check_closed(bad));
  // dbar(bad) = -dzb1^dzb2
  Form expect(0, 2, 2);
  expect.add_term(MultiIndex{}, MultiIndex{1, 2}, PolyFn::constant(ComplexRational(-1)));
  CHECK(dbar(bad) == expect);
  // top degree: the next dbar is the zero map, so membership is vacuous
  Form top(0, 2, 2);
  top.add_term(MultiIndex{}, MultiIndex{1, 2}, PolyFn::variable(1));
  CHECK(check_closed(top));

  SplitMix64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const Form u = random_form(rng, 1, 0, 3, 3);
    CHECK(check_closed(dbar(u)));
  }
}

TEST_CASE("worked solve: zb1 dzb1") {
  const SolveReport rep = solve_minimal(zb1_dzb1(), w8);
  Form expect_u(0, 0, 2);
  expect_u.add_term(MultiIndex{}, MultiIndex{}, parse_poly("(1/2) zb1^2"));
  CHECK(rep.u == expect_u);
  CHECK(rep.residual_norm_sq == 0);
  CHECK(rep.norm_u_sq == Rational(1, 128));
  CHECK(rep.norm_f_sq == Rational(1, 64));
  CHECK(rep.ortho_defect == 0);
  CHECK(rep.bound_satisfied);
  // ratio^2 = 1/2 exactly
  CHECK(2 * rep.norm_u_sq == rep.norm_f_sq);
}

TEST_CASE("worked solve matches the brute-force least squares oracle") {
  // all (0,0)-polynomials of degree <= 3 in z1, zb1 at n = 1
  Form f(0, 1, 1);
  f.add_term(MultiIndex{}, MultiIndex{1}, PolyFn::conj_variable(1));
  const Form oracle_u = oracles::kkt_minimal_norm(f, w8, 3);
  const SolveReport rep = solve_minimal(f, w8);
  CHECK(rep.u == oracle_u);

  // unit coefficient on dzb1^dzb2: u = (-zb2 dzb1 + zb1 dzb2)/2
  Form g(0, 2, 2);
  g.add_term(MultiIndex{}, MultiIndex{1, 2}, PolyFn::constant(ComplexRational(1)));
  const SolveReport rep2 = solve_minimal(g, w8);
  Form expect(0, 1, 2);
  expect.add_term(MultiIndex{}, MultiIndex{1}, parse_poly("(-1/2) zb2"));
  expect.add_term(MultiIndex{}, MultiIndex{2}, parse_poly("(1/2) zb1"));
  CHECK(rep2.u == expect);
  CHECK(rep2.norm_u_sq == Rational(2) * pow_rat(w8.a(1), 2) * pow_rat(w8.a(2), 2));
  CHECK(rep2.norm_f_sq == Rational(4) * pow_rat(w8.a(1), 2) * pow_rat(w8.a(2), 2));
  CHECK(rep2.u == oracles::kkt_minimal_norm(g, w8, 2));
}

TEST_CASE("random minimality against the oracle") {
  SplitMix64 rng(67);
  for (int trial = 0; trial < 4; ++trial) {
    Form u0 = random_form(rng, 0, 0, 2, 2);
    const Form f = dbar(u0);
    if (f.is_zero()) continue;
    const SolveReport rep = solve_minimal(f, w8);
    const Form oracle_u = oracles::kkt_minimal_norm(f, w8, 3);
    CHECK(rep.u == oracle_u);
  }
  // one (s,t) = (1,1) case
  Form u1(1, 0, 2);
  u1.add_term(MultiIndex{1}, MultiIndex{}, parse_poly("(1) zb1 + (1/3) zb2 z2"));
  const Form f1 = dbar(u1);
  const SolveReport rep1 = solve_minimal(f1, w8);
  CHECK(rep1.u == oracles::kkt_minimal_norm(f1, w8, 3));
}

TEST_CASE("solver certificates on random closed data") {
  SplitMix64 rng(71);
  for (std::size_t s = 0; s <= 1; ++s) {
    for (std::size_t t = 0; t <= 1; ++t) {
      for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 3;
        const Form u0 = random_form(rng, s, t, n, 3);
        const Form f = dbar(u0);
        if (f.is_zero()) continue;
        const SolveReport rep = solve_minimal(f, w8);
        CHECK(rep.residual_norm_sq == 0);
        CHECK(dbar(rep.u) == f);
        CHECK(rep.norm_u_sq <= norm_sq(u0, w8));
        CHECK(rep.norm_u_sq <= rep.norm_f_sq);
        CHECK(rep.ortho_defect == 0);
        // deterministic: repeated solves agree exactly
        const SolveReport again = solve_minimal(f, w8);
        CHECK(again.u == rep.u);
        CHECK(again.norm_u_sq == rep.norm_u_sq);
      }
    }
  }
}

TEST_CASE("solve rejects non-closed and degenerate input") {
  Form bad(0, 1, 2);
  bad.add_term(MultiIndex{}, MultiIndex{1}, PolyFn::conj_variable(2));
  CHECK_THROWS_AS(solve_minimal(bad, w8), NotClosed);
  CHECK_THROWS_AS(solve_minimal(Form(0, 0, 2), w8), InvalidDegree);
  const SolveReport zero = solve_minimal(Form(0, 1, 2), w8);
  CHECK(zero.u.is_zero());
  CHECK(zero.norm_u_sq == 0);
  CHECK(zero.bound_satisfied);
}

TEST_CASE("an undersized ansatz aborts loudly") {
  AnsatzSpec tight{0, 0, 0};
  CHECK_THROWS_AS(solve_minimal(zb1_dzb1(), w8, tight), AnsatzInsufficient);
  // with room to retry it recovers
  AnsatzSpec retry{0, 0, 3};
  const SolveReport rep = solve_minimal(zb1_dzb1(), w8, retry);
  CHECK(rep.residual_norm_sq == 0);
  CHECK(rep.norm_u_sq == Rational(1, 128));
}

TEST_CASE("separable fast path agrees with the generic path") {
  Form f(0, 1, 3);
  f.add_term(MultiIndex{}, MultiIndex{1}, parse_poly("(1) zb1 + (1/3) z1 zb1^2"));
  f.add_term(MultiIndex{}, MultiIndex{2}, parse_poly("(2) zb2^3"));
  f.add_term(MultiIndex{}, MultiIndex{3}, parse_poly("(1/5) z3 zb3"));
  REQUIRE(is_coordinate_separable(f));
  REQUIRE(check_closed(f));
  const SolveReport fast = solve_separable(f, w8);
  const SolveReport generic = solve_minimal(f, w8, AnsatzSpec::for_data(f, w8));
  CHECK(fast.u == generic.u);
  CHECK(fast.norm_u_sq == generic.norm_u_sq);
  CHECK(fast.residual_norm_sq == 0);

  Form mixed(0, 1, 2);
  mixed.add_term(MultiIndex{}, MultiIndex{1}, PolyFn::conj_variable(2));
  CHECK_FALSE(is_coordinate_separable(mixed));
  CHECK_THROWS_AS(solve_separable(mixed, w8), InvalidArg);
}

TEST_CASE("ortho_defect certificates") {
  // u = zb1^2/2 pairs to zero with every holomorphic probe
  Form u(0, 0, 2);
  u.add_term(MultiIndex{}, MultiIndex{}, parse_poly("(1/2) zb1^2"));
  CHECK(ortho_defect(u, w8, 6) == 0);

  // u = z1: the probe v = z1 pairs to sigma_1 = 1/8
  Form v(0, 0, 2);
  v.add_term(MultiIndex{}, MultiIndex{}, PolyFn::variable(1));
  CHECK(ortho_defect(v, w8, 6) == Rational(1, 64));

  CHECK(ortho_defect(Form(0, 0, 2), w8, 6) == 0);
}

TEST_CASE("energy identity defect examples") {
  Form unit(0, 1, 1);
  unit.add_term(MultiIndex{}, MultiIndex{1}, PolyFn::constant(ComplexRational(1)));
  CHECK(energy_identity_defect(unit, w8) == 0);
  CHECK(energy_identity_defect(zb1_dzb1(), w8) == 0);
  CHECK(energy_identity_defect(Form(0, 1, 3), w8) == 0);
}
