#include "lehmerlab/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <type_traits>

#include "lehmerlab/errors.hpp"
#include "lehmerlab/rng.hpp"

namespace lehmerlab {

PointSet::PointSet(std::size_t dimension, std::vector<double> coords, std::uint64_t denominator,
                   std::vector<std::uint64_t> numerators)
    : dimension_(dimension),
      coords_(std::move(coords)),
      denominator_(denominator),
      numerators_(std::move(numerators)) {}

PointSet PointSet::floating(std::size_t dimension, std::vector<double> coordinates) {
  if (dimension == 0) throw DomainError("PointSet: dimension must be >= 1");
  if (coordinates.empty() || coordinates.size() % dimension != 0) {
    throw DomainError("PointSet: need a nonempty multiple of the dimension of coordinates");
  }
  for (const double c : coordinates) {
    if (!(c >= 0.0 && c < 1.0)) throw DomainError("PointSet: coordinates must lie in [0, 1)");
  }
  return PointSet(dimension, std::move(coordinates), 0, {});
}

PointSet PointSet::lattice(std::size_t dimension, std::uint64_t denominator, std::vector<std::uint64_t> numerators) {
  if (dimension == 0) throw DomainError("PointSet: dimension must be >= 1");
  if (denominator == 0) throw DomainError("PointSet: denominator must be >= 1");
  if (numerators.empty() || numerators.size() % dimension != 0) {
    throw DomainError("PointSet: need a nonempty multiple of the dimension of numerators");
  }
  std::vector<double> coords(numerators.size());
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    if (numerators[i] >= denominator) throw DomainError("PointSet: numerators must be below the denominator");
    coords[i] = static_cast<double>(numerators[i]) / static_cast<double>(denominator);
  }
  return PointSet(dimension, std::move(coords), denominator, std::move(numerators));
}

PointSet PointSet::project(std::size_t axes) const {
  if (axes == 0 || axes > dimension_) throw DomainError("PointSet::project: bad number of axes");
  std::vector<double> coords;
  std::vector<std::uint64_t> nums;
  coords.reserve(size() * axes);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t a = 0; a < axes; ++a) {
      coords.push_back(coordinate(i, a));
      if (is_lattice()) nums.push_back(numerator(i, a));
    }
  }
  return PointSet(axes, std::move(coords), denominator_, std::move(nums));
}

std::string to_string(DiscrepancyMode mode) {
  switch (mode) {
    case DiscrepancyMode::Exact:
      return "exact";
    case DiscrepancyMode::Sampled:
      return "sampled";
    case DiscrepancyMode::Auto:
      return "auto";
  }
  return "unknown";
}

namespace {

// Critical-box search. Over-counts use closed boxes [lo, hi] with lo <= hi at
// point coordinates (limits of slightly enlarged half-open boxes); under-counts
// use open boxes (lo, hi) with endpoints in {0} u coordinates u {1} (limits of
// slightly shrunk ones). The last axis is handled by a linear sweep. Scores are
// count * count_weight - volume * volume_weight.
template <class T, class A>
class CriticalBoxKernel {
 public:
  CriticalBoxKernel(std::size_t s, std::size_t n, const std::vector<T>& coords, T one, A count_weight,
                    A volume_weight)
      : s_(s), coords_(coords), one_(one), cw_(count_weight), vw_(volume_weight), levels_(s), vals_(s) {
    for (auto& level : levels_) level.resize(s);
    for (std::size_t a = 0; a < s; ++a) {
      auto& order = levels_[0][a];
      order.resize(n);
      std::iota(order.begin(), order.end(), std::uint32_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::uint32_t i, std::uint32_t j) { return c(i, a) < c(j, a); });
    }
  }

  A over(bool anchored, std::size_t part, std::size_t parts) { return over_at(0, A(1), anchored, part, parts); }
  A under(bool anchored, std::size_t part, std::size_t parts) { return under_at(0, A(1), anchored, part, parts); }

 private:
  T c(std::uint32_t i, std::size_t axis) const { return coords_[i * s_ + axis]; }

  template <class Pred>
  void descend(std::size_t d, Pred in_range) {
    for (std::size_t a = d + 1; a < s_; ++a) {
      auto& out = levels_[d + 1][a];
      out.clear();
      for (const std::uint32_t i : levels_[d][a]) {
        if (in_range(c(i, d))) out.push_back(i);
      }
    }
  }

  void distinct_values(std::size_t d) {
    auto& vals = vals_[d];
    vals.clear();
    for (const std::uint32_t i : levels_[d][d]) {
      const T v = c(i, d);
      if (vals.empty() || vals.back() != v) vals.push_back(v);
    }
  }

  A over_sweep(std::size_t d, A w, bool anchored) const {
    const auto& cur = levels_[d][d];
    const A vw = vw_ * w;
    A best = 0;
    A count = 0;
    A low = 0;
    bool first = true;
    for (std::size_t i = 0; i < cur.size();) {
      const T u = c(cur[i], d);
      std::size_t j = i;
      while (j < cur.size() && c(cur[j], d) == u) ++j;
      if (!anchored) {
        const A term = cw_ * count - vw * A(u);
        low = first ? term : std::min(low, term);
        first = false;
      }
      count += A(j - i);
      best = std::max(best, cw_ * count - vw * A(u) - low);
      i = j;
    }
    return best;
  }

  A over_at(std::size_t d, A w, bool anchored, std::size_t part, std::size_t parts) {
    if (levels_[d][d].empty()) return 0;
    if (d + 1 == s_) return (part == 0 || d > 0) ? over_sweep(d, w, anchored) : A(0);
    distinct_values(d);
    const auto& vals = vals_[d];
    A best = 0;
    const std::size_t lo_count = anchored ? 1 : vals.size();
    for (std::size_t li = 0; li < lo_count; ++li) {
      if (d == 0 && li % parts != part) continue;
      const T lo = anchored ? T(0) : vals[li];
      for (std::size_t hi_i = anchored ? 0 : li; hi_i < vals.size(); ++hi_i) {
        const T hi = vals[hi_i];
        descend(d, [lo, hi](T x) { return lo <= x && x <= hi; });
        best = std::max(best, over_at(d + 1, w * A(hi - lo), anchored, part, parts));
      }
    }
    return best;
  }

  // grid 0 = g_0 < ... < g_T = one, with before[t] / after[t] the first
  // sorted position with coordinate >= g_t / > g_t
  void build_grid(std::size_t d, std::vector<T>& grid, std::vector<std::size_t>& before,
                  std::vector<std::size_t>& after) const {
    const auto& cur = levels_[d][d];
    grid.assign(1, T(0));
    before.assign(1, 0);
    std::size_t i = 0;
    while (i < cur.size() && c(cur[i], d) == T(0)) ++i;
    after.assign(1, i);
    while (i < cur.size()) {
      const T u = c(cur[i], d);
      std::size_t j = i;
      while (j < cur.size() && c(cur[j], d) == u) ++j;
      grid.push_back(u);
      before.push_back(i);
      after.push_back(j);
      i = j;
    }
    grid.push_back(one_);
    before.push_back(cur.size());
    after.push_back(cur.size());
  }

  A under_at(std::size_t d, A w, bool anchored, std::size_t part, std::size_t parts) {
    if (levels_[d][d].empty()) {
      if (d > 0 || part == 0) {
        A full = vw_ * w;
        for (std::size_t a = d; a < s_; ++a) full *= A(one_);
        return full;
      }
      return 0;
    }
    std::vector<T> grid;
    std::vector<std::size_t> before;
    std::vector<std::size_t> after;
    build_grid(d, grid, before, after);
    const std::size_t top = grid.size() - 1;
    A best = 0;
    if (d + 1 == s_) {
      if (d == 0 && part != 0) return 0;
      const A vw = vw_ * w;
      A low = vw * A(grid[0]) - cw_ * A(after[0]);
      for (std::size_t j = 1; j <= top; ++j) {
        best = std::max(best, vw * A(grid[j]) - cw_ * A(before[j]) - low);
        if (!anchored) low = std::min(low, vw * A(grid[j]) - cw_ * A(after[j]));
      }
      return best;
    }
    const std::size_t lo_count = anchored ? 1 : top;
    for (std::size_t i = 0; i < lo_count; ++i) {
      if (d == 0 && i % parts != part) continue;
      for (std::size_t j = i + 1; j <= top; ++j) {
        const T lo = grid[i];
        const T hi = grid[j];
        descend(d, [lo, hi](T x) { return lo < x && x < hi; });
        best = std::max(best, under_at(d + 1, w * A(hi - lo), anchored, part, parts));
      }
    }
    return best;
  }

  std::size_t s_;
  const std::vector<T>& coords_;
  T one_;
  A cw_;
  A vw_;
  std::vector<std::vector<std::vector<std::uint32_t>>> levels_;
  std::vector<std::vector<T>> vals_;
};

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

template <class T, class A>
A run_kernel(std::size_t s, std::size_t n, const std::vector<T>& coords, T one, A cw, A vw, bool anchored) {
  std::size_t parts = 1;
  if (!anchored && s >= 2 && n >= 64) {
    parts = std::max(1u, std::thread::hardware_concurrency());
  }
  if (parts == 1) {
    CriticalBoxKernel<T, A> kernel(s, n, coords, one, cw, vw);
    return std::max(kernel.over(anchored, 0, 1), kernel.under(anchored, 0, 1));
  }
  std::vector<A> partial(parts, A(0));
  {
    std::vector<std::jthread> pool;
    for (std::size_t p = 0; p < parts; ++p) {
      pool.emplace_back([&, p] {
        CriticalBoxKernel<T, A> kernel(s, n, coords, one, cw, vw);
        partial[p] = std::max(kernel.over(anchored, p, parts), kernel.under(anchored, p, parts));
      });
    }
  }
  return *std::max_element(partial.begin(), partial.end());
}

struct KernelValue {
  double value = 0.0;
  std::optional<std::pair<std::int64_t, std::int64_t>> fraction;
};

KernelValue critical_box_value(const PointSet& points, bool anchored) {
  const std::size_t s = points.dimension();
  const std::size_t n = points.size();
  if (points.is_lattice()) {
    const std::uint64_t den = points.denominator();
    __int128 den_power = 1;
    for (std::size_t a = 0; a < s; ++a) {
      den_power *= den;
      if (den_power > (static_cast<__int128>(1) << 100) / static_cast<__int128>(n + 1)) {
        throw CapacityError("box_discrepancy: denominator^dimension too large for exact integer arithmetic");
      }
    }
    std::vector<std::int64_t> coords(n * s);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < s; ++a) coords[i * s + a] = static_cast<std::int64_t>(points.numerator(i, a));
    }
    const __int128 best = run_kernel<std::int64_t, __int128>(s, n, coords, static_cast<std::int64_t>(den),
                                                             den_power, static_cast<__int128>(n), anchored);
    __int128 num = best;
    __int128 total = den_power * static_cast<__int128>(n);
    const __int128 g = gcd128(num, total);
    if (g > 1) {
      num /= g;
      total /= g;
    }
    KernelValue out;
    out.value = static_cast<double>(static_cast<long double>(num) / static_cast<long double>(total));
    constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
    if (num <= kMax && total <= kMax) {
      out.fraction = std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(num),
                                                           static_cast<std::int64_t>(total)};
    }
    return out;
  }
  std::vector<long double> coords(n * s);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < s; ++a) coords[i * s + a] = points.coordinate(i, a);
  }
  const long double best =
      run_kernel<long double, long double>(s, n, coords, 1.0L, 1.0L / static_cast<long double>(n), 1.0L, anchored);
  return {static_cast<double>(best), std::nullopt};
}

double random_box_value(const PointSet& points, std::uint64_t samples, std::uint64_t seed) {
  const std::size_t s = points.dimension();
  const std::size_t n = points.size();
  Rng rng(seed);
  std::vector<double> lo(s);
  std::vector<double> hi(s);
  double best = 0.0;
  for (std::uint64_t t = 0; t < samples; ++t) {
    double volume = 1.0;
    for (std::size_t a = 0; a < s; ++a) {
      const double u = rng.uniform();
      const double v = rng.uniform();
      lo[a] = std::min(u, v);
      hi[a] = std::max(u, v);
      volume *= hi[a] - lo[a];
    }
    std::size_t inside = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool in = true;
      for (std::size_t a = 0; a < s && in; ++a) {
        const double x = points.coordinate(i, a);
        in = lo[a] <= x && x < hi[a];
      }
      inside += in ? 1 : 0;
    }
    best = std::max(best, std::abs(static_cast<double>(inside) / static_cast<double>(n) - volume));
  }
  return best;
}

}  // namespace

DiscrepancyResult box_discrepancy(const PointSet& points, const DiscrepancyOptions& options) {
  const std::size_t s = points.dimension();
  const double n = static_cast<double>(points.size());
  const double critical_boxes = std::pow(n + 2.0, 2.0 * static_cast<double>(s));
  DiscrepancyMode mode = options.mode;
  if (mode == DiscrepancyMode::Auto) {
    mode = critical_boxes <= options.exact_budget ? DiscrepancyMode::Exact : DiscrepancyMode::Sampled;
  }

  DiscrepancyResult result;
  result.mode = mode;
  if (mode == DiscrepancyMode::Exact) {
    if (critical_boxes > options.exact_budget) {
      throw CapacityError("box_discrepancy: " + std::to_string(critical_boxes) +
                          " critical boxes exceed the exact budget of " + std::to_string(options.exact_budget));
    }
    const KernelValue kv = critical_box_value(points, false);
    result.value = kv.value;
    result.fraction = kv.fraction;
    return result;
  }

  result.seed = options.seed;
  result.samples = options.samples;
  result.value = random_box_value(points, options.samples, options.seed);
  if (std::pow(n + 2.0, static_cast<double>(s)) <= options.anchored_budget) {
    result.value = std::max(result.value, critical_box_value(points, true).value);
  }
  return result;
}

double region_discrepancy(const PointSet& points, const RegionSpec& region) {
  if (region.dimension() != points.dimension()) {
    throw DomainError("region_discrepancy: region dimension " + std::to_string(region.dimension()) +
                      " but points have dimension " + std::to_string(points.dimension()));
  }
  std::size_t inside = 0;
  for (std::size_t i = 0; i < points.size(); ++i) inside += region.contains(points.point(i)) ? 1 : 0;
  return std::abs(static_cast<double>(inside) / static_cast<double>(points.size()) - region.measure());
}

namespace {

std::optional<double> box_shell(const Box& box, double eps, ShellSide side) {
  const std::size_t s = box.dimension();
  std::vector<double> lo(s);
  std::vector<double> hi(s);
  for (std::size_t a = 0; a < s; ++a) {
    lo[a] = to_double(box.alpha()[a]);
    hi[a] = to_double(box.beta()[a]);
  }
  double volume = 1.0;
  for (std::size_t a = 0; a < s; ++a) volume *= hi[a] - lo[a];

  if (side == ShellSide::Inner) {
    // distance to the complement is the distance to the nearest face not on the cube boundary
    double core = 1.0;
    for (std::size_t a = 0; a < s; ++a) {
      double w = hi[a] - lo[a];
      if (lo[a] > 0.0) w -= eps;
      if (hi[a] < 1.0) w -= eps;
      core *= std::max(w, 0.0);
    }
    return volume - core;
  }

  // Outer: the eps-neighbourhood splits into cells indexed by the set J of axes
  // on which the point lies outside the box; each cell is a product of edges
  // and a 1/2^|J| piece of a |J|-ball. Exact when every margin is 0 or >= eps.
  std::vector<int> sides(s);
  for (std::size_t a = 0; a < s; ++a) {
    const double margins[2] = {lo[a], 1.0 - hi[a]};
    sides[a] = 0;
    for (const double m : margins) {
      if (m == 0.0) continue;
      if (m < eps) return std::nullopt;
      ++sides[a];
    }
  }
  double total = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s); ++mask) {
    double term = 1.0;
    std::size_t j = 0;
    for (std::size_t a = 0; a < s; ++a) {
      if (mask >> a & 1) {
        term *= sides[a];
        ++j;
      } else {
        term *= hi[a] - lo[a];
      }
    }
    if (term == 0.0) continue;
    total += term * unit_ball_volume(j) * std::pow(eps, static_cast<double>(j)) / std::ldexp(1.0, static_cast<int>(j));
  }
  return total;
}

std::optional<double> ball_shell(const Ball& ball, double eps, ShellSide side) {
  const std::size_t s = ball.center.size();
  double margin = 1.0;
  for (const double c : ball.center) margin = std::min({margin, c, 1.0 - c});
  const double rho = ball.radius;
  const double vol = unit_ball_volume(s);
  const double ds = static_cast<double>(s);
  if (side == ShellSide::Inner) {
    if (rho > margin) return std::nullopt;
    return vol * (std::pow(rho, ds) - std::pow(std::max(rho - eps, 0.0), ds));
  }
  if (rho + eps > margin) return std::nullopt;
  return vol * (std::pow(rho + eps, ds) - std::pow(rho, ds));
}

std::optional<double> analytic_shell(const RegionSpec& region, double eps, ShellSide side) {
  return std::visit(
      [&](const auto& shape) -> std::optional<double> {
        using S = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<S, RegionSpec::Full> || std::is_same_v<S, RegionSpec::Empty>) {
          return 0.0;
        } else if constexpr (std::is_same_v<S, Box>) {
          return box_shell(shape, eps, side);
        } else if constexpr (std::is_same_v<S, Ball>) {
          return ball_shell(shape, eps, side);
        } else if constexpr (std::is_same_v<S, RegionSpec::Cylinder>) {
          return analytic_shell(*shape.base, eps, side);
        } else {
          return std::nullopt;
        }
      },
      region.shape());
}

double sampled_shell(const RegionSpec& region, double eps, ShellSide side, std::uint64_t samples,
                     std::uint64_t seed) {
  constexpr std::size_t kDirections = 64;
  const std::size_t s = region.dimension();
  Rng rng(seed);
  std::vector<double> dirs(kDirections * s);
  for (std::size_t d = 0; d < kDirections; ++d) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (std::size_t a = 0; a < s; ++a) {
        dirs[d * s + a] = rng.normal();
        norm += dirs[d * s + a] * dirs[d * s + a];
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (std::size_t a = 0; a < s; ++a) dirs[d * s + a] /= norm;
  }

  std::vector<double> u(s);
  std::vector<double> probe(s);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < samples; ++t) {
    for (double& x : u) x = rng.uniform();
    const bool inside = region.contains(u);
    if (inside != (side == ShellSide::Inner)) continue;
    for (std::size_t d = 0; d < kDirections; ++d) {
      bool in_cube = true;
      for (std::size_t a = 0; a < s; ++a) {
        probe[a] = u[a] + eps * dirs[d * s + a];
        in_cube = in_cube && probe[a] >= 0.0 && probe[a] < 1.0;
      }
      if (in_cube && region.contains(probe) != inside) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace

ShellMeasure boundary_shell_measure(const RegionSpec& region, double eps, ShellSide side, std::uint64_t samples,
                                    std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("boundary_shell_measure: eps must lie in (0, 1/2)");
  if (const auto exact = analytic_shell(region, eps, side)) return {*exact, true, 0, 0};
  if (samples == 0) throw DomainError("boundary_shell_measure: Monte Carlo needs samples > 0");
  return {sampled_shell(region, eps, side, samples, seed), false, samples, seed};
}

ShellBound linear_h(double constant) {
  if (!(constant >= 0.0)) throw DomainError("linear_h: constant must be nonnegative");
  return [constant](double eps) { return constant * eps; };
}

double lnw_transfer_bound(double box_discrepancy, std::size_t dimension, const ShellBound& h) {
  if (!(box_discrepancy >= 0.0 && box_discrepancy <= 1.0)) {
    throw DomainError("lnw_transfer_bound: discrepancy must lie in [0, 1]");
  }
  if (dimension == 0) throw DomainError("lnw_transfer_bound: dimension must be >= 1");
  const double s = static_cast<double>(dimension);
  return h(std::sqrt(s) * std::pow(box_discrepancy, 1.0 / s));
}

double calibrate_linear_constant(const RegionSpec& region, std::uint64_t samples, std::uint64_t seed) {
  double best = 0.0;
  for (int e = 3; e <= 10; ++e) {
    const double eps = std::ldexp(1.0, -e);
    for (const ShellSide side : {ShellSide::Inner, ShellSide::Outer}) {
      const auto shell = boundary_shell_measure(region, eps, side, samples, seed + static_cast<std::uint64_t>(e));
      best = std::max(best, shell.value / eps);
    }
  }
  return best;
}

}  // namespace lehmerlab
