#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lehmerlab/rational.hpp"

namespace lehmerlab {

/// Axis-parallel box prod [alpha_j, beta_j) inside the unit cube, with exact
/// rational edges so that dilated endpoints are computed without rounding.
class Box {
 public:
  Box(std::vector<Rational> alpha, std::vector<Rational> beta);
  static Box unit(std::size_t dimension);

  std::size_t dimension() const { return alpha_.size(); }
  const std::vector<Rational>& alpha() const { return alpha_; }
  const std::vector<Rational>& beta() const { return beta_; }
  Rational measure() const;

  /// Integers n with alpha_j q <= n < beta_j q, as the half-open range [lo, hi).
  std::pair<std::int64_t, std::int64_t> dilated_range(std::size_t axis, std::uint64_t q) const;

  bool contains(std::span<const double> x) const;

  /// Splits along one axis at the given cut, alpha < cut < beta.
  std::pair<Box, Box> split(std::size_t axis, const Rational& cut) const;

  std::string to_string() const;

 private:
  std::vector<Rational> alpha_;
  std::vector<Rational> beta_;
};

/// Euclidean ball; open, no wraparound.
struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

struct MeasureEstimate {
  double value = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// A measurable region of the unit cube [0,1)^s: a membership predicate plus
/// its Lebesgue measure, exact where a formula exists and Monte Carlo otherwise.
class RegionSpec {
 public:
  using Predicate = std::function<bool(std::span<const double>)>;

  struct Full {};
  struct Empty {};
  struct Custom {
    Predicate contains;
  };
  /// region x [0,1)
  struct Cylinder {
    std::shared_ptr<const RegionSpec> base;
  };
  using Shape = std::variant<Full, Empty, Box, Ball, Custom, Cylinder>;

  static constexpr std::uint64_t kDefaultSamples = 1'000'000;
  static constexpr std::uint64_t kDefaultSeed = 20080101;

  static RegionSpec full(std::size_t dimension);
  static RegionSpec empty(std::size_t dimension);
  static RegionSpec box(Box box);
  /// Exact measure when the ball lies inside the cube, Monte Carlo otherwise.
  static RegionSpec ball(std::vector<double> center, double radius,
                         std::uint64_t samples = kDefaultSamples, std::uint64_t seed = kDefaultSeed);
  static RegionSpec custom(std::size_t dimension, Predicate contains, bool smooth_boundary,
                           std::uint64_t samples = kDefaultSamples, std::uint64_t seed = kDefaultSeed);
  /// base x [0,1), one dimension higher.
  static RegionSpec cylinder(const RegionSpec& base);

  std::size_t dimension() const { return dimension_; }
  bool contains(std::span<const double> x) const;
  double measure() const { return measure_; }
  bool measure_is_exact() const { return !estimate_.has_value(); }
  const std::optional<MeasureEstimate>& estimate() const { return estimate_; }
  bool smooth_boundary() const { return smooth_boundary_; }
  const Shape& shape() const { return shape_; }
  std::string describe() const;

 private:
  RegionSpec(std::size_t dimension, Shape shape, double measure, std::optional<MeasureEstimate> estimate,
             bool smooth_boundary);

  std::size_t dimension_;
  Shape shape_;
  double measure_;
  std::optional<MeasureEstimate> estimate_;
  bool smooth_boundary_;
};

/// Volume of the s-dimensional unit ball.
double unit_ball_volume(std::size_t s);

/// Uniform Monte Carlo estimate of the measure of {x in [0,1)^s : contains(x)}.
MeasureEstimate monte_carlo_measure(std::size_t dimension, const RegionSpec::Predicate& contains,
                                    std::uint64_t samples, std::uint64_t seed);

/// Parses "lo:hi,lo:hi,..." with rational or decimal endpoints.
Box parse_box(std::string_view text);

/// Parses "full", "empty", "box:<box>", or "ball:<c1,...,cs>:<radius>".
RegionSpec parse_region(std::string_view text, std::size_t dimension,
                        std::uint64_t samples = RegionSpec::kDefaultSamples,
                        std::uint64_t seed = RegionSpec::kDefaultSeed);

}  // namespace lehmerlab
