#include <catch2/catch_amalgamated.hpp>

#include "dbarlab/experiments.hpp"
#include "dbarlab/hermite.hpp"

using namespace dbarlab;

namespace {
const WeightSequence w8 = WeightSequence::standard(8);
}

TEST_CASE("base cases and the worked H_{1,1}") {
  CHECK(hermite_poly(0, 0, 1, w8) == PolyFn::constant(ComplexRational(1)));
  CHECK(hermite_poly(0, 1, 1, w8) == PolyFn::conj_variable(1));
  CHECK(hermite_poly(1, 0, 2, w8) == PolyFn::variable(2));
  // sigma_1 = 1/8
  CHECK(hermite_poly(1, 1, 1, w8) == parse_poly("(1) z1 zb1 + (-1/8)"));
  CHECK(inner(hermite_poly(1, 1, 1, w8), hermite_poly(1, 1, 1, w8), w8) ==
        ComplexRational(Rational(1, 64)));
}

TEST_CASE("the two recurrences agree") {
  // climb p along q = 0, then raise q with the zbar recurrence only; the
  // library builds through the z recurrence instead
  const Rational sigma = w8.sigma(1);
  const unsigned cap = 5;
  std::vector<std::vector<PolyFn>> table(cap + 1, std::vector<PolyFn>(cap + 1));
  table[0][0] = PolyFn::constant(ComplexRational(1));
  for (unsigned p = 1; p <= cap; ++p) {
    table[p][0] = PolyFn::variable(1) * table[p - 1][0];
  }
  for (unsigned q = 1; q <= cap; ++q) {
    for (unsigned p = 0; p <= cap; ++p) {
      table[p][q] = PolyFn::conj_variable(1) * table[p][q - 1];
      if (p > 0) table[p][q] -= table[p - 1][q - 1].scaled(ComplexRational(sigma * p));
    }
  }
  for (unsigned p = 0; p <= cap; ++p) {
    for (unsigned q = 0; q <= cap; ++q) {
      CHECK(table[p][q] == hermite_poly(p, q, 1, w8));
    }
  }
}

TEST_CASE("orthogonality with exact norms") {
  for (unsigned p = 0; p <= 3; ++p) {
    for (unsigned q = 0; q <= 3; ++q) {
      for (unsigned r = 0; r <= 3; ++r) {
        for (unsigned s = 0; s <= 3; ++s) {
          const ComplexRational ip =
              inner(hermite_poly(p, q, 2, w8), hermite_poly(r, s, 2, w8), w8);
          if (p == r && q == s) {
            const Rational expect =
                Rational(factorial(p)) * Rational(factorial(q)) * pow_rat(w8.sigma(2), p + q);
            CHECK(ip == ComplexRational(expect));
          } else {
            CHECK(ip.is_zero());
          }
        }
      }
    }
  }
}

TEST_CASE("lowering and raising") {
  for (unsigned p = 0; p <= 4; ++p) {
    for (unsigned q = 0; q <= 4; ++q) {
      const PolyFn h = hermite_poly(p, q, 1, w8);
      const PolyFn low_q = d_zbar(h, 1);
      const PolyFn expect_q =
          (q == 0) ? PolyFn{} : hermite_poly(p, q - 1, 1, w8).scaled(ComplexRational(Rational(q)));
      CHECK(low_q == expect_q);
      const PolyFn low_p = d_z(h, 1);
      const PolyFn expect_p =
          (p == 0) ? PolyFn{} : hermite_poly(p - 1, q, 1, w8).scaled(ComplexRational(Rational(p)));
      CHECK(low_p == expect_p);
      const PolyFn raised = delta(h, 1, w8);
      CHECK(raised ==
            hermite_poly(p, q + 1, 1, w8).scaled(ComplexRational(-Rational(1) / w8.sigma(1))));
    }
  }
}

TEST_CASE("expansion of z zbar and round trips") {
  const HermiteExpansion e = expand(parse_poly("(1) z1 zb1"), w8);
  REQUIRE(e.coeffs().size() == 2);
  CHECK(e.coeffs().at(Monomial{{{1, 1}}, {{1, 1}}}) == ComplexRational(1));
  CHECK(e.coeffs().at(Monomial{}) == ComplexRational(w8.sigma(1)));

  CHECK(expand(PolyFn::constant(ComplexRational(1)), w8).coeffs().size() == 1);

  const PolyFn f = parse_poly("(1) zb1^3 z2");
  CHECK(reconstruct(expand(f, w8)) == f);

  SplitMix64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const PolyFn g = random_poly(rng, 3, 5);
    const HermiteExpansion eg = expand(g, w8);
    CHECK(reconstruct(eg) == g);
    // Parseval
    CHECK(eg.norm_sq() == inner(g, g, w8).re);
  }
}

TEST_CASE("expansion agrees with exact projections") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const PolyFn g = random_poly(rng, 2, 4);
    const HermiteExpansion e = expand(g, w8);
    for (const auto& [d, c] : e.coeffs()) {
      const PolyFn h = hermite_tensor(d, w8);
      CHECK(inner(g, h, w8) == c * hermite_norm_sq(d, w8));
    }
  }
}

TEST_CASE("tensor norms") {
  Bidegree d;
  d.z = {{1, 2}};
  d.zb = {{1, 1}, {3, 2}};
  const Rational expect = Rational(factorial(2)) * pow_rat(w8.sigma(1), 2) *
                          Rational(factorial(1)) * pow_rat(w8.sigma(1), 1) *
                          Rational(factorial(2)) * pow_rat(w8.sigma(3), 2);
  CHECK(hermite_norm_sq(d, w8) == expect);
  CHECK(inner(hermite_tensor(d, w8), hermite_tensor(d, w8), w8) == ComplexRational(expect));
}
