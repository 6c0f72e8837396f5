#include "doctest.h"

#include <cmath>
#include <numbers>
#include <set>

#include "lehmerlab/errors.hpp"
#include "lehmerlab/exponents.hpp"
#include "lehmerlab/lehmer.hpp"
#include "lehmerlab/rng.hpp"
#include "oracles.hpp"

using namespace lehmerlab;

namespace {

LehmerInstance make(u64 q, unsigned k, std::vector<u64> a, std::vector<i64> b) {
  return LehmerInstance(Modulus(q), k, std::move(a), std::move(b));
}

Box half_box(std::size_t dim) {
  return Box(std::vector<Rational>(dim, Rational(0)), std::vector<Rational>(dim, Rational(1, 2)));
}

// random box with edges on a grid of 1/d
Box random_box(Rng& rng, std::size_t dim) {
  std::vector<Rational> lo;
  std::vector<Rational> hi;
  for (std::size_t j = 0; j < dim; ++j) {
    const i64 d = 1 + static_cast<i64>(rng.bits() % 12);
    const i64 x = static_cast<i64>(rng.bits() % static_cast<u64>(d));
    const i64 y = x + 1 + static_cast<i64>(rng.bits() % static_cast<u64>(d - x));
    lo.emplace_back(x, d);
    hi.emplace_back(y, d);
  }
  return Box(lo, hi);
}

}  // namespace

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(make(7, 1, {2, 7}, {0, 0}), DomainError);
  CHECK_THROWS_AS(make(12, 1, {2, 1}, {0, 0}), DomainError);
  CHECK_THROWS_AS(make(7, 2, {1, 1}, {0, 0}), DomainError);
  CHECK_THROWS_AS(make(7, 0, {1}, {0}), DomainError);
  const auto inst = make(7, 1, {2, 3}, {-1, 5});
  CHECK(inst.b() == std::vector<u64>{1, 2});
}

TEST_CASE("enumeration examples") {
  CHECK(enumerate_N(make(7, 1, {2, 3}, {1, 2})) == 1);
  CHECK(enumerate_N(make(101, 2, {2, 3, 5}, {1, 2, 3})) == 330);
  CHECK(enumerate_N(make(30, 3, {1, 1, 1, 1}, {4, 5, 6, 7})) == 512);
  CHECK_THROWS_AS(enumerate_N(make(101, 2, {1, 1, 1}, {0, 0, 0}), {100.0, 1}), CapacityError);
  std::vector<u64> seen;
  for_each_tuple(make(7, 1, {2, 3}, {1, 2}), [&](std::span<const u64> n, u64 inv) {
    seen.push_back(n[0]);
    CHECK(inv == 5);
  });
  CHECK(seen == std::vector<u64>{3});
}

TEST_CASE("trivial moduli give phi^k") {
  for (u64 q = 2; q <= 120; ++q) {
    const u64 phi = euler_phi(q);
    CHECK(enumerate_N(make(q, 1, {1, 1}, {0, 0})) == phi);
    CHECK(enumerate_N(make(q, 2, {1, 1, 1}, {0, 0, 0})) == phi * phi);
  }
}

TEST_CASE("box counts") {
  const auto inst = make(101, 2, {2, 3, 5}, {1, 1, 1});
  const Box half = half_box(3);
  CHECK(count_M_box(inst, half) == 51);
  CHECK(count_M_box_charsum(inst, half) == 51);
  const auto full_inst = make(101, 2, {2, 3, 5}, {1, 2, 3});
  CHECK(count_M_box(full_inst, Box::unit(3)) == enumerate_N(full_inst));
  CHECK(count_M_box_charsum(make(13, 1, {1, 1}, {0, 0}), Box::unit(2)) == 12);
  CHECK(count_M_box_charsum(make(7, 1, {2, 3}, {1, 2}), Box::unit(2)) == 1);
  // a box thinner than 1/q holds no lattice point
  const Box thin({Rational(1, 3), Rational(0)}, {Rational(1, 3) + Rational(1, 1000), Rational(1)});
  CHECK(count_M_box(make(101, 1, {1, 1}, {0, 0}), thin) == 0);
  CHECK(count_M_box_charsum(make(101, 1, {1, 1}, {0, 0}), thin) == 0);
  CHECK_THROWS_AS(count_M_box(inst, half_box(2)), DomainError);
}

TEST_CASE("box counts agree with the brute-force oracle and the character identity") {
  Rng rng(2024);
  for (int t = 0; t < 120; ++t) {
    const u64 q = 3 + rng.bits() % 60;
    const unsigned k = 1 + static_cast<unsigned>(rng.bits() % 3);
    const Modulus m(q);
    std::vector<u64> a;
    std::vector<i64> b;
    for (unsigned i = 0; i <= k; ++i) {
      u64 ai = 1 + rng.bits() % std::min<u64>(q - 1, 6);
      while (std::gcd(ai, q) != 1) ai = 1 + rng.bits() % std::min<u64>(q - 1, 6);
      a.push_back(ai);
      b.push_back(static_cast<i64>(rng.bits() % 7));
    }
    const LehmerInstance inst(m, k, a, b);
    const Box box = random_box(rng, k + 1);
    const u64 expected = oracle::count_box(q, k, a, b, box.alpha(), box.beta());
    CHECK(count_M_box(inst, box) == expected);
    CHECK(count_M_box_charsum(inst, box) == expected);
  }
}

TEST_CASE("splitting a box adds up") {
  Rng rng(99);
  for (int t = 0; t < 60; ++t) {
    const u64 q = 5 + rng.bits() % 196;
    const unsigned k = 1 + static_cast<unsigned>(rng.bits() % 2);
    std::vector<u64> a(k + 1, 1);
    std::vector<i64> b(k + 1, 0);
    a[0] = (std::gcd<u64>(2, q) == 1) ? 2 : 1;
    const LehmerInstance inst(Modulus(q), k, a, b);
    const Box box = random_box(rng, k + 1);
    const std::size_t axis = rng.bits() % (k + 1);
    const Rational lo = box.alpha()[axis];
    const Rational hi = box.beta()[axis];
    const Rational cut = lo + (hi - lo) * Rational(1 + static_cast<i64>(rng.bits() % 9), 10);
    const auto [left, right] = box.split(axis, cut);
    CHECK(count_M_box(inst, left) + count_M_box(inst, right) == count_M_box(inst, box));
  }
}

TEST_CASE("main term") {
  CHECK(main_term(make(7, 1, {2, 3}, {0, 0}), 1.0) == doctest::Approx(1.0));
  CHECK(main_term(make(101, 2, {2, 3, 5}, {0, 0, 0}), 1.0) == doctest::Approx(10000.0 / 30.0));
  CHECK(main_term(make(11, 3, {1, 1, 1, 1}, {0, 0, 0, 0}), 1.0) == doctest::Approx(1000.0));
  CHECK_THROWS_AS(main_term(make(11, 1, {1, 1}, {0, 0}), 1.5), DomainError);
}

TEST_CASE("region counts") {
  const auto inst = make(101, 2, {1, 1, 1}, {0, 0, 0});
  const auto ball = RegionSpec::ball({0.5, 0.5}, 0.25);
  CHECK(ball.measure() == doctest::Approx(std::numbers::pi / 16));
  CHECK(count_region(inst, ball, false) == 1992);
  CHECK(count_region(inst, RegionSpec::cylinder(ball), true) == 1992);
  CHECK(count_region(inst, RegionSpec::full(2), false) == enumerate_N(inst));
  CHECK(count_region(inst, RegionSpec::full(3), true) == enumerate_N(inst));
  CHECK_THROWS_AS(count_region(inst, ball, true), DomainError);
  // a box region counts the same as the box itself
  const Box half = half_box(3);
  CHECK(count_region(inst, RegionSpec::box(half), true) == count_M_box(inst, half));
}

TEST_CASE("point sets") {
  const auto inst = make(5, 1, {1, 1}, {0, 0});
  const PointSet A = point_set_A(inst);
  REQUIRE(A.size() == 4);
  const std::vector<std::pair<double, double>> expected{{.2, .2}, {.4, .6}, {.6, .4}, {.8, .8}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(A.coordinate(i, 0) == doctest::Approx(expected[i].first));
    CHECK(A.coordinate(i, 1) == doctest::Approx(expected[i].second));
  }
  const PointSet B = point_set_B(make(31, 2, {2, 3, 5}, {1, 1, 1}));
  const PointSet A2 = point_set_A(make(31, 2, {2, 3, 5}, {1, 1, 1}));
  CHECK(A2.size() == B.size());
  CHECK(A2.size() == enumerate_N(make(31, 2, {2, 3, 5}, {1, 1, 1})));
  const PointSet P = A2.project(2);
  for (std::size_t i = 0; i < B.size(); ++i) {
    CHECK(P.numerator(i, 0) == B.numerator(i, 0));
    CHECK(P.numerator(i, 1) == B.numerator(i, 1));
  }
}

TEST_CASE("inverse pairs are symmetric") {
  for (u64 q = 3; q <= 300; ++q) {
    const PointSet A = point_set_A(make(q, 1, {1, 1}, {0, 0}));
    std::set<std::pair<u64, u64>> pts;
    for (std::size_t i = 0; i < A.size(); ++i) pts.insert({A.numerator(i, 0), A.numerator(i, 1)});
    for (const auto& [x, y] : pts) CHECK(pts.contains({y, x}));
  }
}

TEST_CASE("H statistics") {
  CHECK(h_statistic(make(7, 1, {1, 1}, {0, 0})) == 2);
  CHECK(h_statistic(make(2, 1, {1, 1}, {0, 0})) == 0);
  CHECK(inverse_spread(Modulus(7)) == 2);
  CHECK(inverse_spread(Modulus(1009)) == 945);
  CHECK(inverse_spread(Modulus(2)) == 0);
  CHECK_THROWS_AS(h_statistic(make(7, 1, {6, 5}, {0, 0}), {}), DomainError);
  for (u64 q = 3; q <= 400; ++q) {
    const u64 h = inverse_spread(Modulus(q));
    CHECK(h == oracle::spread(q));
    CHECK(h <= q - 2);
    CHECK(h_statistic(make(q, 1, {1, 1}, {0, 0})) == h);
  }
}

TEST_CASE("error shape exponents") {
  CHECK(box_error_shape(2, 1).second_exponent == Rational(3, 2));
  CHECK(box_error_shape(3, 1).second_exponent == Rational(2));
  CHECK(box_error_shape(2, 3).second_exponent == Rational(16, 9));
  for (unsigned k = 2; k <= 6; ++k) CHECK(box_error_shape(k, 1).second_exponent == Rational(k + 1, 2));
  CHECK(box_error_shape(2, 1).product_power == Rational(1, 3));
  CHECK_THROWS_AS(box_error_shape(1, 1), DomainError);
  CHECK_THROWS_AS(box_error_shape(3, 4), DomainError);

  CHECK(prime_box_error_shape(3, 1).second_exponent == Rational(3));
  CHECK(prime_box_error_shape(5, 1).second_exponent == Rational(4));
  CHECK(prime_box_error_shape(5, 2).second_exponent == Rational(35, 8));
  CHECK(prime_box_error_shape_variant(5, 2).second_exponent == Rational(5) - Rational(3 * 4, 16));
  CHECK(prime_box_error_shape(5, 7).second_exponent < Rational(5));
  CHECK_THROWS_AS(prime_box_error_shape(2, 1), DomainError);

  CHECK(joint_region_error_shape(2, 1).norm_power == Rational(1, 3));
  CHECK(joint_region_error_shape(2, 1).first_exponent == Rational(5, 3));
  CHECK(marginal_region_error_shape(2, 1).first_exponent == Rational(3, 2));
  CHECK(marginal_region_error_shape(2, 1).second_exponent == Rational(7, 4));
  CHECK(prime_joint_region_error_shape(3, 1).second_exponent == Rational(3));
  CHECK(prime_marginal_region_error_shape(4, 1).second_exponent == Rational(4) - Rational(2, 16));
}

TEST_CASE("threshold exponents") {
  CHECK(threshold_exponent(2) == Rational(3, 4));
  CHECK(threshold_exponent(3) == Rational(4, 3));
  CHECK(threshold_exponent(4) == Rational(15, 8));
  CHECK(threshold_exponent(5) == Rational(5, 2));
  CHECK(threshold_exponent(6) == Rational(35, 12));
  CHECK(threshold_exponent(7) == Rational(32, 9));
  CHECK_THROWS_AS(threshold_exponent(1), DomainError);
}

TEST_CASE("evaluated error terms") {
  const auto inst = make(101, 2, {2, 3, 5}, {1, 1, 1});
  const double expected = std::sqrt(38.0) * 101.0 / 30.0 + std::pow(101.0, 1.5) / std::pow(30.0, 1.0 / 3.0);
  CHECK(error_term_thm1(inst, 1) == doctest::Approx(expected));
  CHECK_THROWS_AS(error_term_thm4(make(100, 3, {1, 1, 1, 1}, {0, 0, 0, 0}), 1), DomainError);
  CHECK(error_term_thm4(make(101, 3, {1, 1, 1, 1}, {0, 0, 0, 0}), 1) > 0);
}
