#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lehmerlab/region.hpp"

namespace lehmerlab {

/// A finite point set in [0,1)^s. Lattice sets keep their integer numerators
/// over a common denominator so the exact discrepancy kernel can work in
/// integer arithmetic.
class PointSet {
 public:
  static PointSet floating(std::size_t dimension, std::vector<double> coordinates);
  static PointSet lattice(std::size_t dimension, std::uint64_t denominator,
                          std::vector<std::uint64_t> numerators);

  std::size_t size() const { return coords_.size() / dimension_; }
  std::size_t dimension() const { return dimension_; }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords_).subspan(i * dimension_, dimension_);
  }
  double coordinate(std::size_t i, std::size_t axis) const { return coords_[i * dimension_ + axis]; }

  bool is_lattice() const { return denominator_ != 0; }
  std::uint64_t denominator() const { return denominator_; }
  std::uint64_t numerator(std::size_t i, std::size_t axis) const { return numerators_[i * dimension_ + axis]; }

  /// The first `axes` coordinates of every point.
  PointSet project(std::size_t axes) const;

 private:
  PointSet(std::size_t dimension, std::vector<double> coords, std::uint64_t denominator,
           std::vector<std::uint64_t> numerators);

  std::size_t dimension_;
  std::vector<double> coords_;
  std::uint64_t denominator_;
  std::vector<std::uint64_t> numerators_;
};

enum class DiscrepancyMode { Exact, Sampled, Auto };

std::string to_string(DiscrepancyMode mode);

struct DiscrepancyOptions {
  DiscrepancyMode mode = DiscrepancyMode::Auto;
  /// Upper limit on (#F + 2)^(2s), the number of critical boxes, for exact mode.
  /// The default admits 64 points in three dimensions.
  double exact_budget = 8.3e10;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0x5eed;
  /// Work limit for the anchored-box sweep in sampled mode.
  double anchored_budget = 2e8;
};

struct DiscrepancyResult {
  double value = 0.0;
  DiscrepancyMode mode = DiscrepancyMode::Exact;
  /// Exact value as a reduced fraction for lattice point sets in exact mode.
  std::optional<std::pair<std::int64_t, std::int64_t>> fraction;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
};

/// D(F) = sup over boxes prod [alpha_j, beta_j) in [0,1)^s (no wraparound) of
/// |#(F in box)/#F - volume|.
DiscrepancyResult box_discrepancy(const PointSet& points, const DiscrepancyOptions& options = {});

/// |#(F in region)/#F - measure(region)|
double region_discrepancy(const PointSet& points, const RegionSpec& region);

enum class ShellSide { Inner, Outer };

struct ShellMeasure {
  double value = 0.0;
  bool exact = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Measure of the outer shell {u outside, dist(u, region) < eps} or the inner
/// shell {u inside, dist(u, complement) < eps}, both inside [0,1)^s.
ShellMeasure boundary_shell_measure(const RegionSpec& region, double eps, ShellSide side,
                                    std::uint64_t samples = 200'000, std::uint64_t seed = 0x5be11);

/// Increasing h with h(eps) -> 0, bounding shell measures.
using ShellBound = std::function<double(double)>;

ShellBound linear_h(double constant);

/// h(sqrt(s) D^(1/s))
double lnw_transfer_bound(double box_discrepancy, std::size_t dimension, const ShellBound& h);

/// A region together with the bound on its shells.
struct RegionClass {
  RegionSpec region;
  ShellBound h;
};

/// max over eps in {2^-3, ..., 2^-10} and both sides of shell_measure / eps.
double calibrate_linear_constant(const RegionSpec& region, std::uint64_t samples = 200'000,
                                 std::uint64_t seed = 0x5be11);

}  // namespace lehmerlab
