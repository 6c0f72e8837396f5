#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lehmerlab/discrepancy.hpp"
#include "lehmerlab/errors.hpp"
#include "lehmerlab/lehmer.hpp"
#include "lehmerlab/rng.hpp"

using namespace lehmerlab;

namespace {

// Box discrepancy by trying every pair of grid values per axis. Over-counts use
// closed boxes at point coordinates, under-counts open boxes between grid values.
Rational naive_discrepancy(const PointSet& f) {
  const std::size_t s = f.dimension();
  const std::size_t n = f.size();
  const auto den = static_cast<i64>(f.denominator());
  std::vector<std::vector<Rational>> grid(s);
  for (std::size_t a = 0; a < s; ++a) {
    grid[a] = {Rational(0), Rational(1)};
    for (std::size_t i = 0; i < n; ++i) grid[a].emplace_back(static_cast<i64>(f.numerator(i, a)), den);
    std::sort(grid[a].begin(), grid[a].end());
    grid[a].erase(std::unique(grid[a].begin(), grid[a].end()), grid[a].end());
  }
  auto coord = [&](std::size_t i, std::size_t a) { return Rational(static_cast<i64>(f.numerator(i, a)), den); };
  Rational best(0);
  std::vector<std::size_t> lo(s, 0);
  std::vector<std::size_t> hi(s, 0);
  // odometer over (lo_a <= hi_a) for every axis
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (a == s) {
      Rational vol(1);
      for (std::size_t j = 0; j < s; ++j) vol *= grid[j][hi[j]] - grid[j][lo[j]];
      i64 closed = 0;
      i64 open = 0;
      for (std::size_t i = 0; i < n; ++i) {
        bool c = true;
        bool o = true;
        for (std::size_t j = 0; j < s; ++j) {
          const Rational x = coord(i, j);
          c = c && grid[j][lo[j]] <= x && x <= grid[j][hi[j]];
          o = o && grid[j][lo[j]] < x && x < grid[j][hi[j]];
        }
        closed += c ? 1 : 0;
        open += o ? 1 : 0;
      }
      best = std::max(best, Rational(closed, static_cast<i64>(n)) - vol);
      best = std::max(best, vol - Rational(open, static_cast<i64>(n)));
      return;
    }
    for (lo[a] = 0; lo[a] < grid[a].size(); ++lo[a]) {
      for (hi[a] = lo[a]; hi[a] < grid[a].size(); ++hi[a]) rec(a + 1);
    }
  };
  rec(0);
  return best;
}

Rational exact_fraction(const DiscrepancyResult& r) {
  REQUIRE(r.fraction.has_value());
  return Rational(r.fraction->first, r.fraction->second);
}

DiscrepancyOptions exact() {
  DiscrepancyOptions o;
  o.mode = DiscrepancyMode::Exact;
  return o;
}

}  // namespace

TEST_CASE("point set construction") {
  const auto f = PointSet::lattice(2, 5, {1, 2, 3, 4});
  CHECK(f.size() == 2);
  CHECK(f.is_lattice());
  CHECK(f.coordinate(1, 0) == doctest::Approx(0.6));
  CHECK(f.project(1).size() == 2);
  CHECK(f.project(1).dimension() == 1);
  CHECK_THROWS_AS(PointSet::lattice(2, 5, {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(PointSet::lattice(1, 5, {5}), DomainError);
  CHECK_THROWS_AS(PointSet::floating(1, {1.0}), DomainError);
  CHECK_THROWS_AS(PointSet::floating(2, {}), DomainError);
  CHECK_THROWS_AS(f.project(3), DomainError);
}

TEST_CASE("two points and the equispaced grid") {
  CHECK(exact_fraction(box_discrepancy(PointSet::lattice(1, 2, {0, 1}), exact())) == Rational(1, 2));
  CHECK(box_discrepancy(PointSet::floating(1, {0.0, 0.5}), exact()).value == doctest::Approx(0.5));
  for (u64 n = 1; n <= 32; ++n) {
    std::vector<u64> num(n);
    std::vector<double> x(n);
    for (u64 i = 0; i < n; ++i) {
      num[i] = i;
      x[i] = static_cast<double>(i) / static_cast<double>(n);
    }
    CHECK(exact_fraction(box_discrepancy(PointSet::lattice(1, n, num), exact())) == Rational(1, static_cast<i64>(n)));
    CHECK(box_discrepancy(PointSet::floating(1, x), exact()).value == doctest::Approx(1.0 / static_cast<double>(n)));
  }
}

TEST_CASE("frozen discrepancy values") {
  const auto a5 = point_set_A(LehmerInstance(Modulus(5), 1, {1, 1}, {0, 0}));
  CHECK(exact_fraction(box_discrepancy(a5, exact())) == Rational(16, 25));
  const auto a7 = point_set_A(LehmerInstance(Modulus(7), 1, {1, 1}, {0, 0}));
  CHECK(exact_fraction(box_discrepancy(a7, exact())) == Rational(149, 294));
  CHECK(exact_fraction(box_discrepancy(PointSet::lattice(1, 11, {1, 4, 7, 10}), exact())) == Rational(7, 22));
}

TEST_CASE("exact kernel agrees with the naive search") {
  Rng rng(404);
  for (int t = 0; t < 60; ++t) {
    const std::size_t s = 1 + rng.bits() % 3;
    const std::size_t n = 1 + rng.bits() % (s == 3 ? 5 : 9);
    const u64 den = 2 + rng.bits() % 13;
    std::vector<u64> num(n * s);
    for (auto& v : num) v = rng.bits() % den;
    const auto f = PointSet::lattice(s, den, num);
    const auto r = box_discrepancy(f, exact());
    CHECK(exact_fraction(r) == naive_discrepancy(f));
    CHECK(r.value == doctest::Approx(to_double(naive_discrepancy(f))));
    // the floating path sees the same points
    std::vector<double> x(num.size());
    for (std::size_t i = 0; i < num.size(); ++i) x[i] = static_cast<double>(num[i]) / static_cast<double>(den);
    CHECK(box_discrepancy(PointSet::floating(s, x), exact()).value == doctest::Approx(r.value).epsilon(1e-12));
  }
}

TEST_CASE("lehmer point sets against the naive search") {
  for (u64 q : {5, 7, 8, 9, 11, 13}) {
    const auto a = point_set_A(LehmerInstance(Modulus(q), 1, {1, 1}, {0, 0}));
    CHECK(exact_fraction(box_discrepancy(a, exact())) == naive_discrepancy(a));
  }
  const auto b = point_set_B(LehmerInstance(Modulus(11), 2, {1, 1, 2}, {0, 0, 1}));
  CHECK(exact_fraction(box_discrepancy(b, exact())) == naive_discrepancy(b));
}

TEST_CASE("sampled mode never exceeds the exact value") {
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> x(2 * 20);
    for (auto& v : x) v = rng.uniform();
    const auto f = PointSet::floating(2, x);
    const double d = box_discrepancy(f, exact()).value;
    DiscrepancyOptions o;
    o.mode = DiscrepancyMode::Sampled;
    o.samples = 2000;
    o.seed = 100 + static_cast<u64>(t);
    const auto r = box_discrepancy(f, o);
    CHECK(r.mode == DiscrepancyMode::Sampled);
    CHECK(r.value <= d + 1e-12);
    CHECK(r.value >= 0.5 * d);
    CHECK(r.seed == o.seed);
    CHECK(box_discrepancy(f, o).value == r.value);
  }
}

TEST_CASE("auto mode and capacity") {
  const auto small = PointSet::lattice(2, 7, {1, 2, 3, 4});
  CHECK(box_discrepancy(small).mode == DiscrepancyMode::Exact);
  std::vector<double> x(3 * 400);
  Rng rng(1);
  for (auto& v : x) v = rng.uniform();
  const auto big = PointSet::floating(3, x);
  DiscrepancyOptions o;
  o.samples = 1000;
  CHECK(box_discrepancy(big, o).mode == DiscrepancyMode::Sampled);
  o.mode = DiscrepancyMode::Exact;
  CHECK_THROWS_AS(box_discrepancy(big, o), CapacityError);
  CHECK(to_string(DiscrepancyMode::Exact) == "exact");
  CHECK(to_string(DiscrepancyMode::Sampled) == "sampled");
}

TEST_CASE("region discrepancy") {
  const auto f = PointSet::lattice(2, 5, {1, 2, 3, 4, 2, 2});
  CHECK(region_discrepancy(f, RegionSpec::full(2)) == doctest::Approx(0.0));
  CHECK(region_discrepancy(f, RegionSpec::empty(2)) == doctest::Approx(0.0));
  const Box box({Rational(0), Rational(0)}, {Rational(1, 2), Rational(1, 2)});
  // two of three points fall in [0,1/2)^2
  CHECK(region_discrepancy(f, RegionSpec::box(box)) == doctest::Approx(5.0 / 12.0));
  CHECK(region_discrepancy(f, RegionSpec::box(box)) <= box_discrepancy(f, exact()).value + 1e-12);
  CHECK_THROWS_AS(region_discrepancy(f, RegionSpec::full(3)), DomainError);

  Rng rng(2024);
  std::vector<double> x(2 * 1000);
  for (auto& v : x) v = rng.uniform();
  const double d = region_discrepancy(PointSet::floating(2, x), RegionSpec::ball({0.5, 0.5}, 0.25));
  CHECK(d < 0.05);
}

TEST_CASE("shell measures with closed forms") {
  const double pi = std::numbers::pi;
  const auto ball = RegionSpec::ball({0.5, 0.5}, 0.25);
  for (double eps : {0.01, 0.05, 0.1}) {
    const auto in = boundary_shell_measure(ball, eps, ShellSide::Inner);
    const auto out = boundary_shell_measure(ball, eps, ShellSide::Outer);
    CHECK(in.exact);
    CHECK(out.exact);
    CHECK(in.value == doctest::Approx(pi * (0.0625 - (0.25 - eps) * (0.25 - eps))));
    CHECK(out.value == doctest::Approx(pi * ((0.25 + eps) * (0.25 + eps) - 0.0625)));
  }
  const auto square = RegionSpec::box(Box({Rational(1, 4), Rational(1, 4)}, {Rational(3, 4), Rational(3, 4)}));
  for (double eps : {0.01, 0.1}) {
    const auto in = boundary_shell_measure(square, eps, ShellSide::Inner);
    const auto out = boundary_shell_measure(square, eps, ShellSide::Outer);
    CHECK(in.exact);
    CHECK(out.exact);
    CHECK(in.value == doctest::Approx(0.25 - (0.5 - 2 * eps) * (0.5 - 2 * eps)));
    CHECK(out.value == doctest::Approx(2.0 * eps + pi * eps * eps));
  }
  // a box flush with the cube only grows on its free sides
  const auto corner = RegionSpec::box(Box({Rational(0), Rational(0)}, {Rational(1, 2), Rational(1, 2)}));
  CHECK(boundary_shell_measure(corner, 0.1, ShellSide::Inner).value == doctest::Approx(0.25 - 0.16));
  CHECK(boundary_shell_measure(corner, 0.1, ShellSide::Outer).value ==
        doctest::Approx(0.1 + pi * 0.01 / 4.0));
  CHECK_THROWS_AS(boundary_shell_measure(ball, 0.0, ShellSide::Inner), DomainError);
  CHECK_THROWS_AS(boundary_shell_measure(ball, 0.5, ShellSide::Inner), DomainError);
}

TEST_CASE("sampled shells stay proportional to eps") {
  const auto disc = RegionSpec::custom(
      2, [](std::span<const double> x) { return (x[0] - 0.4) * (x[0] - 0.4) + (x[1] - 0.5) * (x[1] - 0.5) < 0.09; },
      true, 200'000, 3);
  for (double eps : {0.125, 0.0625, 0.03125}) {
    const auto m = boundary_shell_measure(disc, eps, ShellSide::Outer, 100'000, 17);
    CHECK_FALSE(m.exact);
    CHECK(m.samples == 100'000);
    // true value is 2 pi r eps + pi eps^2 with r = 0.3
    const double truth = 2 * std::numbers::pi * 0.3 * eps + std::numbers::pi * eps * eps;
    CHECK(m.value == doctest::Approx(truth).epsilon(0.2));
  }
  const double c = calibrate_linear_constant(RegionSpec::ball({0.5, 0.5}, 0.25), 50'000);
  CHECK(c > 1.5);
  CHECK(c < 2.0);
}

TEST_CASE("transfer bound") {
  const auto h = linear_h(1.0);
  CHECK(lnw_transfer_bound(0.0, 2, h) == 0.0);
  CHECK(lnw_transfer_bound(0.04, 1, h) == doctest::Approx(0.04));
  CHECK(lnw_transfer_bound(0.01, 2, h) == doctest::Approx(std::sqrt(2.0) * 0.1));
  CHECK(lnw_transfer_bound(0.001, 3, linear_h(2.0)) == doctest::Approx(2.0 * std::sqrt(3.0) * 0.1));
  CHECK_THROWS_AS(lnw_transfer_bound(1.5, 2, h), DomainError);
  CHECK_THROWS_AS(lnw_transfer_bound(0.5, 0, h), DomainError);
}

TEST_CASE("transfer bound holds for lehmer point sets and a ball") {
  const auto ball = RegionSpec::ball({0.5, 0.5}, 0.25);
  const double c = calibrate_linear_constant(ball, 50'000);
  for (u64 q : {11, 13, 17, 19, 23}) {
    const auto f = point_set_A(LehmerInstance(Modulus(q), 1, {1, 1}, {0, 0}));
    const double d = box_discrepancy(f, exact()).value;
    CHECK(region_discrepancy(f, ball) <= lnw_transfer_bound(d, 2, linear_h(c)));
  }
}
