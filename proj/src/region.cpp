#include "lehmerlab/region.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lehmerlab/errors.hpp"
#include "lehmerlab/rng.hpp"

namespace lehmerlab {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Box::Box(std::vector<Rational> alpha, std::vector<Rational> beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (alpha_.size() != beta_.size() || alpha_.empty()) throw DomainError("Box: edge vectors must match and be nonempty");
  for (std::size_t j = 0; j < alpha_.size(); ++j) {
    if (alpha_[j] < 0 || beta_[j] > 1 || !(alpha_[j] < beta_[j])) {
      throw DomainError("Box: need 0 <= alpha < beta <= 1 on every axis");
    }
  }
}

Box Box::unit(std::size_t dimension) {
  return Box(std::vector<Rational>(dimension, Rational(0)), std::vector<Rational>(dimension, Rational(1)));
}

Rational Box::measure() const {
  Rational m(1);
  for (std::size_t j = 0; j < alpha_.size(); ++j) m *= beta_[j] - alpha_[j];
  return m;
}

std::pair<std::int64_t, std::int64_t> Box::dilated_range(std::size_t axis, std::uint64_t q) const {
  return {ceil_mul(alpha_.at(axis), q), ceil_mul(beta_.at(axis), q)};
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t j = 0; j < alpha_.size(); ++j) {
    if (x[j] < to_double(alpha_[j]) || x[j] >= to_double(beta_[j])) return false;
  }
  return true;
}

std::pair<Box, Box> Box::split(std::size_t axis, const Rational& cut) const {
  auto lo_beta = beta_;
  auto hi_alpha = alpha_;
  lo_beta.at(axis) = cut;
  hi_alpha.at(axis) = cut;
  return {Box(alpha_, std::move(lo_beta)), Box(std::move(hi_alpha), beta_)};
}

std::string Box::to_string() const {
  std::string out;
  for (std::size_t j = 0; j < alpha_.size(); ++j) {
    if (j) out += ',';
    out += format_rational(alpha_[j]) + ":" + format_rational(beta_[j]);
  }
  return out;
}

double unit_ball_volume(std::size_t s) {
  const double d = static_cast<double>(s);
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

MeasureEstimate monte_carlo_measure(std::size_t dimension, const RegionSpec::Predicate& contains,
                                    std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw DomainError("monte_carlo_measure: need at least one sample");
  Rng rng(seed);
  std::vector<double> x(dimension);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    for (auto& c : x) c = rng.uniform();
    if (contains(x)) ++hits;
  }
  return {static_cast<double>(hits) / static_cast<double>(samples), samples, seed};
}

RegionSpec::RegionSpec(std::size_t dimension, Shape shape, double measure,
                       std::optional<MeasureEstimate> estimate, bool smooth_boundary)
    : dimension_(dimension),
      shape_(std::move(shape)),
      measure_(measure),
      estimate_(std::move(estimate)),
      smooth_boundary_(smooth_boundary) {
  if (dimension_ == 0) throw DomainError("RegionSpec: dimension must be >= 1");
  if (measure_ < 0.0 || measure_ > 1.0) throw DomainError("RegionSpec: measure outside [0, 1]");
}

RegionSpec RegionSpec::full(std::size_t dimension) { return {dimension, Full{}, 1.0, std::nullopt, true}; }

RegionSpec RegionSpec::empty(std::size_t dimension) { return {dimension, Empty{}, 0.0, std::nullopt, true}; }

RegionSpec RegionSpec::box(Box box) {
  const std::size_t s = box.dimension();
  const double m = to_double(box.measure());
  return {s, std::move(box), m, std::nullopt, true};
}

RegionSpec RegionSpec::ball(std::vector<double> center, double radius, std::uint64_t samples,
                            std::uint64_t seed) {
  if (center.empty()) throw DomainError("RegionSpec::ball: empty center");
  if (!(radius > 0.0)) throw DomainError("RegionSpec::ball: radius must be positive");
  const std::size_t s = center.size();
  bool inside = true;
  for (const double c : center) inside = inside && c - radius >= 0.0 && c + radius <= 1.0;
  Ball b{std::move(center), radius};
  if (inside) {
    const double m = unit_ball_volume(s) * std::pow(radius, static_cast<double>(s));
    return {s, std::move(b), m, std::nullopt, true};
  }
  const Ball copy = b;
  auto est = monte_carlo_measure(
      s,
      [&copy](std::span<const double> x) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) d2 += (x[j] - copy.center[j]) * (x[j] - copy.center[j]);
        return d2 < copy.radius * copy.radius;
      },
      samples, seed);
  return {s, std::move(b), est.value, est, true};
}

RegionSpec RegionSpec::custom(std::size_t dimension, Predicate contains, bool smooth_boundary,
                              std::uint64_t samples, std::uint64_t seed) {
  auto est = monte_carlo_measure(dimension, contains, samples, seed);
  return {dimension, Custom{std::move(contains)}, est.value, est, smooth_boundary};
}

RegionSpec RegionSpec::cylinder(const RegionSpec& base) {
  return {base.dimension() + 1, Cylinder{std::make_shared<const RegionSpec>(base)}, base.measure(),
          base.estimate(), base.smooth_boundary()};
}

bool RegionSpec::contains(std::span<const double> x) const {
  if (x.size() != dimension_) throw DomainError("RegionSpec::contains: dimension mismatch");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Full>) {
          return true;
        } else if constexpr (std::is_same_v<T, Empty>) {
          return false;
        } else if constexpr (std::is_same_v<T, Box>) {
          return s.contains(x);
        } else if constexpr (std::is_same_v<T, Ball>) {
          double d2 = 0.0;
          for (std::size_t j = 0; j < x.size(); ++j) d2 += (x[j] - s.center[j]) * (x[j] - s.center[j]);
          return d2 < s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Custom>) {
          return s.contains(x);
        } else {
          return s.base->contains(x.first(x.size() - 1));
        }
      },
      shape_);
}

std::string RegionSpec::describe() const {
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Full>) {
          return "full";
        } else if constexpr (std::is_same_v<T, Empty>) {
          return "empty";
        } else if constexpr (std::is_same_v<T, Box>) {
          return "box:" + s.to_string();
        } else if constexpr (std::is_same_v<T, Ball>) {
          std::ostringstream os;
          os.precision(17);
          os << "ball:";
          for (std::size_t j = 0; j < s.center.size(); ++j) os << (j ? "," : "") << s.center[j];
          os << ":" << s.radius;
          return os.str();
        } else if constexpr (std::is_same_v<T, Custom>) {
          return "custom";
        } else {
          return s.base->describe() + "x[0,1)";
        }
      },
      shape_);
}

Box parse_box(std::string_view text) {
  std::vector<Rational> alpha, beta;
  for (const auto part : split(text, ',')) {
    const auto edges = split(part, ':');
    if (edges.size() != 2) throw ConfigError("box axis must look like lo:hi, got '" + std::string(part) + "'");
    alpha.push_back(parse_rational(edges[0]));
    beta.push_back(parse_rational(edges[1]));
  }
  try {
    return Box(std::move(alpha), std::move(beta));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

RegionSpec parse_region(std::string_view text, std::size_t dimension, std::uint64_t samples,
                        std::uint64_t seed) {
  if (text == "full") return RegionSpec::full(dimension);
  if (text == "empty") return RegionSpec::empty(dimension);
  if (text.starts_with("box:")) {
    auto box = parse_box(text.substr(4));
    if (box.dimension() != dimension) throw ConfigError("region box has the wrong dimension");
    return RegionSpec::box(std::move(box));
  }
  if (text.starts_with("ball:")) {
    const auto parts = split(text.substr(5), ':');
    if (parts.size() != 2) throw ConfigError("ball region must look like ball:c1,...,cs:radius");
    std::vector<double> center;
    for (const auto c : split(parts[0], ',')) center.push_back(to_double(parse_rational(c)));
    if (center.size() != dimension) throw ConfigError("region ball has the wrong dimension");
    const double radius = to_double(parse_rational(parts[1]));
    try {
      return RegionSpec::ball(std::move(center), radius, samples, seed);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown region '" + std::string(text) + "'");
}

}  // namespace lehmerlab
