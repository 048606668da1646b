#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dbarlab/gaussian.hpp"
#include "oracles.hpp"

using namespace dbarlab;

namespace {
const WeightSequence w8 = WeightSequence::standard(8);
}

TEST_CASE("weight sequence construction and certificate") {
  CHECK(w8.a(1) == Rational(1, 4));
  CHECK(w8.a(2) == Rational(1, 8));
  CHECK(w8.sigma(1) == Rational(1, 8));
  CHECK(w8.total() == Rational(1, 2));
  CHECK_THROWS_AS(w8.a(9), IndexOutOfRange);
  CHECK_THROWS_AS(w8.a(0), IndexOutOfRange);
  // sum >= 1 is rejected up front
  CHECK_THROWS_AS(WeightSequence::geometric(Rational(1), Rational(1, 2), 4), ValidationError);
  CHECK_THROWS_AS(WeightSequence::from_list({Rational(1, 2), Rational(1, 2)}), ValidationError);
  CHECK_THROWS_AS(WeightSequence::from_list({Rational(-1, 4)}), ValidationError);
  CHECK(WeightSequence::from_list({Rational(1, 3), Rational(1, 5)}).size() == 2);
  CHECK(w8.extended(3).size() == 8);
  CHECK(w8.extended(12).a(12) == Rational(1, 8192));
}

TEST_CASE("monomial moments") {
  CHECK(monomial_moment(1, 1, 1, w8) == ComplexRational(Rational(1, 8)));
  CHECK(monomial_moment(2, 1, 1, w8) == ComplexRational(Rational(0)));
  CHECK(monomial_moment(2, 2, 1, w8) == ComplexRational(Rational(1, 32)));
  CHECK(monomial_moment(0, 0, 3, w8) == ComplexRational(Rational(1)));
  CHECK_THROWS_AS(monomial_moment(1, 1, 99, w8), IndexOutOfRange);
  for (unsigned p = 0; p <= 4; ++p) {
    for (unsigned q = 0; q <= 4; ++q) {
      CHECK(monomial_moment(p, q, 2, w8) == monomial_moment(q, p, 2, w8).conj());
    }
  }
  CHECK_THROWS_AS(moment_sum_check(0.5, 1, 10, 1, w8), InvalidArg);
}

TEST_CASE("moments agree with the quadrature oracle") {
  for (unsigned p = 0; p <= 3; ++p) {
    for (unsigned q = 0; q <= 3; ++q) {
      const auto exact = monomial_moment(p, q, 2, w8).to_complex();
      const auto quad = oracles::moment_quadrature(p, q, to_double(w8.a(2)));
      CHECK(std::abs(exact - quad) < 1e-12);
    }
  }
}

TEST_CASE("product structure of joint moments") {
  // the joint moment factors over coordinates; compare against a 4-dimensional rule
  const double a1 = to_double(w8.a(1)), a2 = to_double(w8.a(2));
  for (unsigned p1 = 0; p1 <= 2; ++p1) {
    for (unsigned q1 = 0; q1 <= 2; ++q1) {
      for (unsigned p2 = 0; p2 <= 2; ++p2) {
        for (unsigned q2 = 0; q2 <= 2; ++q2) {
          const auto exact =
              (monomial_moment(p1, q1, 1, w8) * monomial_moment(p2, q2, 2, w8)).to_complex();
          const auto quad = oracles::joint_moment_quadrature(p1, q1, p2, q2, a1, a2);
          CHECK(std::abs(exact - quad) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("sampler determinism and marginals") {
  const auto none = sample(2, 0, 42, w8);
  CHECK(none.empty());
  const auto s1 = sample(3, 4096, 42, w8);
  const auto s2 = sample(3, 4096, 42, w8);
  CHECK(s1 == s2);
  const auto s3 = sample(3, 4096, 43, w8);
  CHECK(s1 != s3);
  // worker count must not change the stream
  const auto s4 = sample(3, 4096, 42, w8, 4);
  CHECK(s1 == s4);

  // Re/Im variances within 5 standard errors of a_j^2
  const auto pts = sample(2, 100000, 2024, w8);
  for (std::size_t j = 0; j < 2; ++j) {
    detail::RunningStats re, im;
    for (const auto& pt : pts) {
      re.add(pt[j].real() * pt[j].real());
      im.add(pt[j].imag() * pt[j].imag());
    }
    const double target = to_double(w8.a(j + 1) * w8.a(j + 1));
    CHECK(std::abs(re.mean - target) <= 5 * re.stderr_of_mean());
    CHECK(std::abs(im.mean - target) <= 5 * im.stderr_of_mean());
  }
  CHECK_THROWS_AS(sample(99, 1, 0, w8), IndexOutOfRange);
}

TEST_CASE("empirical |z|^2 mean matches 2 a^2") {
  const auto pts = sample(2, 100000, 7, w8);
  detail::RunningStats stats;
  for (const auto& pt : pts) stats.add(std::norm(pt[0]));
  const double target = to_double(w8.sigma(1));
  CHECK(std::abs(stats.mean - target) <= 5 * stats.stderr_of_mean());
}

TEST_CASE("moment sum check at p = 2 and p = 1") {
  const auto rep2 = moment_sum_check(2.0, 4, 100000, 11, w8);
  // exact per-coordinate value is 2 a_i^2, so the total is 2 sum a_i^2
  double expect = 0.0;
  for (std::size_t j = 1; j <= 4; ++j) expect += 2.0 * to_double(w8.a(j) * w8.a(j));
  CHECK(std::abs(rep2.exact - expect) < 1e-14);
  CHECK(rep2.pass(5.0));

  const auto rep1 = moment_sum_check(1.0, 8, 100000, 12, w8);
  double wsum = 0.0;
  for (std::size_t j = 1; j <= 8; ++j) wsum += to_double(w8.a(j));
  const double c = 2.0 * std::sqrt(2.0) / std::sqrt(std::numbers::pi);
  CHECK(std::abs(rep1.exact - c * wsum) < 1e-14);
  CHECK(std::abs(c - 1.5957691216057308) < 1e-12);
  CHECK(rep1.pass(5.0));
}

TEST_CASE("exponential integrability bound") {
  // n=1, a=1/4: the bound is exp(1/16 + (2 sqrt2/sqrt pi)/4)
  const auto rep = fernique_check(Rational(1), 100000, 5, w8, 1);
  const double c = 2.0 * std::sqrt(2.0) / std::sqrt(std::numbers::pi);
  CHECK(std::abs(rep.bound - std::exp(1.0 / 16.0 + c / 4.0)) < 1e-12);
  CHECK(rep.pass);

  const auto rep4 = fernique_check(Rational(1), 100000, 6, w8, 4);
  CHECK(rep4.pass);

  // shrinking weights drive both the bound and the empirical mean to 1
  const WeightSequence tiny = WeightSequence::geometric(Rational(1, 1000000), Rational(1, 2), 2);
  const auto rep_tiny = fernique_check(Rational(1), 20000, 9, tiny, 2);
  CHECK(std::abs(rep_tiny.bound - 1.0) < 1e-4);
  CHECK(std::abs(rep_tiny.empirical - 1.0) < 1e-4);

  // a stronger functional bound only shrinks the exponent
  const auto rep_eps = fernique_check(Rational(4), 50000, 6, w8, 2);
  CHECK(rep_eps.pass);
}
