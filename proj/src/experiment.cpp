#include "lehmerlab/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "lehmerlab/charsums.hpp"
#include "lehmerlab/discrepancy.hpp"
#include "lehmerlab/errors.hpp"
#include "lehmerlab/exponents.hpp"
#include "lehmerlab/hull.hpp"
#include "lehmerlab/lehmer.hpp"
#include "lehmerlab/region.hpp"
#include "lehmerlab/rng.hpp"

namespace lehmerlab {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CountScaling:
      return "count-scaling";
    case ExperimentKind::CharsumMoments:
      return "charsum-moments";
    case ExperimentKind::DiscrepancyScan:
      return "discrepancy-scan";
    case ExperimentKind::HullScan:
      return "hull-scan";
    case ExperimentKind::HScan:
      return "h-scan";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  for (const auto kind : {ExperimentKind::CountScaling, ExperimentKind::CharsumMoments,
                          ExperimentKind::DiscrepancyScan, ExperimentKind::HullScan, ExperimentKind::HScan}) {
    if (to_string(kind) == text) return kind;
  }
  throw ConfigError("unknown experiment kind '" + text + "'");
}

std::vector<u64> ModulusRange::moduli() const {
  if (min < 2) throw ConfigError("modulus range must start at 2 or above");
  if (max < min) throw ConfigError("modulus range is empty: max < min");
  if (max >= (u64{1} << 32)) throw ConfigError("modulus range upper end is too large");
  std::vector<u64> out;
  if (primes_only) {
    std::vector<bool> composite(max + 1, false);
    for (u64 p = 2; p * p <= max; ++p) {
      if (composite[p]) continue;
      for (u64 m = p * p; m <= max; m += p) composite[m] = true;
    }
    for (u64 q = min; q <= max; ++q) {
      if (!composite[q]) out.push_back(q);
    }
  } else {
    for (u64 q = min; q <= max; ++q) out.push_back(q);
  }
  if (out.empty()) throw ConfigError("modulus range contains no moduli");
  return out;
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

bool needs_instance(ExperimentKind kind) {
  return kind == ExperimentKind::CountScaling || kind == ExperimentKind::DiscrepancyScan;
}

void validate(const ExperimentConfig& c) {
  (void)c.range.moduli();
  if (needs_instance(c.kind)) {
    const auto& inst = c.instance;
    if (inst.k < 1) throw ConfigError("instance.k must be >= 1");
    if (inst.a.size() != inst.k + 1 || inst.b.size() != inst.k + 1) {
      throw ConfigError("instance.a and instance.b need k+1 entries");
    }
    for (const u64 a : inst.a) {
      if (a < 1) throw ConfigError("instance.a entries must be >= 1");
    }
    if (inst.box && inst.region) throw ConfigError("instance.box and instance.region are mutually exclusive");
    if (inst.box && parse_box(*inst.box).dimension() != inst.k + 1) {
      throw ConfigError("instance.box must have k+1 axes");
    }
  }
  for (const int r : c.r_values) {
    if (r < 1) throw ConfigError("r values must be >= 1");
  }
  if (c.r_values.empty()) throw ConfigError("r must list at least one value");
  if (!(c.budget.enumeration > 0) || !(c.budget.discrepancy_exact > 0) || c.budget.discrepancy_samples == 0 ||
      c.budget.monte_carlo_samples == 0) {
    throw ConfigError("budgets must be positive");
  }
  if (c.kind == ExperimentKind::CharsumMoments) {
    const Rational f = parse_rational(c.progression.length_fraction);
    if (f <= Rational(0) || f > Rational(1)) throw ConfigError("progression.length_fraction must lie in (0, 1]");
    if (c.progression.step < 1) throw ConfigError("progression.step must be >= 1");
    if (c.progression.start < 0) throw ConfigError("progression.start must be >= 0");
  }
  if (c.output.empty()) throw ConfigError("output path is empty");
  if (!(c.transfer_constant > 0)) throw ConfigError("transfer_constant must be positive");
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  reject_unknown_keys(j, {"experiment", "moduli", "instance", "progression", "r", "output", "seed", "budget",
                          "threads", "transfer_constant"},
                      "config");
  ExperimentConfig c;
  if (!j.contains("experiment")) throw ConfigError("config needs an 'experiment' kind");
  std::string kind;
  read(j, "experiment", kind);
  c.kind = parse_experiment_kind(kind);

  if (j.contains("moduli")) {
    const json& m = j.at("moduli");
    reject_unknown_keys(m, {"min", "max", "filter"}, "moduli");
    read(m, "min", c.range.min);
    read(m, "max", c.range.max);
    std::string filter = c.range.primes_only ? "primes" : "all";
    read(m, "filter", filter);
    if (filter != "primes" && filter != "all") throw ConfigError("moduli.filter must be 'primes' or 'all'");
    c.range.primes_only = filter == "primes";
  }
  if (j.contains("instance")) {
    const json& i = j.at("instance");
    reject_unknown_keys(i, {"k", "a", "b", "box", "region", "joint"}, "instance");
    read(i, "k", c.instance.k);
    read(i, "a", c.instance.a);
    read(i, "b", c.instance.b);
    read(i, "joint", c.instance.joint);
    if (i.contains("box") && !i.at("box").is_null()) {
      std::string box;
      read(i, "box", box);
      c.instance.box = box;
    }
    if (i.contains("region") && !i.at("region").is_null()) {
      std::string region;
      read(i, "region", region);
      c.instance.region = region;
    }
  }
  if (j.contains("progression")) {
    const json& p = j.at("progression");
    reject_unknown_keys(p, {"start", "length_fraction", "step", "offset"}, "progression");
    read(p, "start", c.progression.start);
    read(p, "length_fraction", c.progression.length_fraction);
    read(p, "step", c.progression.step);
    read(p, "offset", c.progression.offset);
  }
  read(j, "r", c.r_values);
  read(j, "output", c.output);
  read(j, "seed", c.seed);
  read(j, "threads", c.threads);
  read(j, "transfer_constant", c.transfer_constant);
  if (j.contains("budget")) {
    const json& b = j.at("budget");
    reject_unknown_keys(b, {"enumeration", "discrepancy_exact", "discrepancy_samples", "monte_carlo_samples"},
                        "budget");
    read(b, "enumeration", c.budget.enumeration);
    read(b, "discrepancy_exact", c.budget.discrepancy_exact);
    read(b, "discrepancy_samples", c.budget.discrepancy_samples);
    read(b, "monte_carlo_samples", c.budget.monte_carlo_samples);
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.kind);
  j["moduli"] = {{"min", c.range.min}, {"max", c.range.max}, {"filter", c.range.primes_only ? "primes" : "all"}};
  j["instance"] = {{"k", c.instance.k},
                   {"a", c.instance.a},
                   {"b", c.instance.b},
                   {"box", c.instance.box ? json(*c.instance.box) : json(nullptr)},
                   {"region", c.instance.region ? json(*c.instance.region) : json(nullptr)},
                   {"joint", c.instance.joint}};
  j["progression"] = {{"start", c.progression.start},
                      {"length_fraction", c.progression.length_fraction},
                      {"step", c.progression.step},
                      {"offset", c.progression.offset}};
  j["r"] = c.r_values;
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["transfer_constant"] = c.transfer_constant;
  j["budget"] = {{"enumeration", c.budget.enumeration},
                 {"discrepancy_exact", c.budget.discrepancy_exact},
                 {"discrepancy_samples", c.budget.discrepancy_samples},
                 {"monte_carlo_samples", c.budget.monte_carlo_samples}};
  return j;
}

ExponentFit fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("fit_exponent: x and y differ in length");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 5) throw DomainError("fit_exponent: needs at least 5 rows with positive error, got " + std::to_string(n));
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0) throw DomainError("fit_exponent: all x values coincide");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.rows = n;
  return fit;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<std::string> csv_columns(ExperimentKind kind) {
  std::vector<std::string> cols{"schema_version", "experiment", "q"};
  std::vector<std::string> rest;
  switch (kind) {
    case ExperimentKind::CountScaling:
      rest = {"k", "a_product", "a_norm", "observed", "main", "error", "shape_r1", "shape_r2", "shape_r3"};
      break;
    case ExperimentKind::CharsumMoments:
      rest = {"phi", "K", "L", "a", "b", "second_moment", "second_moment_bound", "fourth_moment",
              "fourth_bound_ratio", "principal_exact", "principal_main", "principal_error", "erat_bound",
              "max_nonprincipal", "pv_ratio"};
      break;
    case ExperimentKind::DiscrepancyScan:
      rest = {"k", "points", "dimension", "mode", "box_discrepancy", "region_discrepancy", "calibrated_C",
              "transfer_bound", "ratio", "holds"};
      break;
    case ExperimentKind::HullScan:
      rest = {"points", "V"};
      break;
    case ExperimentKind::HScan:
      rest = {"H", "q_minus_H", "q_pow_3_4", "ratio"};
      break;
  }
  cols.insert(cols.end(), rest.begin(), rest.end());
  return cols;
}

namespace {

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    os << v[i];
  }
  return os.str();
}

std::string instance_call(const ExperimentConfig& c, u64 q) {
  return "LehmerInstance(Modulus(" + std::to_string(q) + "), " + std::to_string(c.instance.k) + ", {" +
         join(c.instance.a, ", ") + "}, {" + join(c.instance.b, ", ") + "})";
}

std::string instance_flags(const ExperimentConfig& c, u64 q) {
  return "--q " + std::to_string(q) + " --k " + std::to_string(c.instance.k) + " --a " + join(c.instance.a) +
         " --b " + join(c.instance.b);
}

// Shared per-run state, built once before the rows are computed.
struct RunContext {
  const ExperimentConfig& config;
  std::optional<Box> box;
  std::optional<RegionSpec> region;
  double measure = 1.0;
  double calibrated_c = 0.0;
};

RegionSpec default_ball(std::size_t dim) { return RegionSpec::ball(std::vector<double>(dim, 0.5), 0.25); }

void count_row(const RunContext& ctx, ExperimentRow& row) {
  const auto& c = ctx.config;
  const LehmerInstance inst(Modulus(row.q), c.instance.k, c.instance.a, c.instance.b);
  const EnumerationOptions opts{c.budget.enumeration, 1};
  u64 observed = 0;
  std::string extra;
  if (ctx.region) {
    observed = count_region(inst, *ctx.region, c.instance.joint, opts);
    row.call = "count_region(" + instance_call(c, row.q) + ", parse_region(\"" + *c.instance.region + "\", " +
               std::to_string(ctx.region->dimension()) + "), " + (c.instance.joint ? "true" : "false") + ")";
    extra = " --region " + *c.instance.region + (c.instance.joint ? " --joint" : "");
  } else if (ctx.box) {
    observed = count_M_box(inst, *ctx.box, opts);
    row.call = "count_M_box(" + instance_call(c, row.q) + ", parse_box(\"" + *c.instance.box + "\"))";
    extra = " --box " + *c.instance.box;
  } else {
    observed = enumerate_N(inst, opts);
    row.call = "enumerate_N(" + instance_call(c, row.q) + ")";
  }
  row.command = "lehmerlab count " + instance_flags(c, row.q) + extra;
  const double main = main_term(inst, ctx.measure);
  const double error = static_cast<double>(observed) - main;
  row.fields = {std::to_string(c.instance.k), format_double(static_cast<double>(inst.a_product())),
                format_double(inst.a_norm()), std::to_string(observed), format_double(main), format_double(error)};
  for (int r = 1; r <= 3; ++r) {
    row.fields.push_back(c.instance.k >= 2 ? format_double(error_term_thm1(inst, r)) : "");
  }
  row.fit_x = static_cast<double>(row.q);
  row.fit_y = std::abs(error);
}

void charsum_row(const RunContext& ctx, ExperimentRow& row) {
  const auto& c = ctx.config;
  const Modulus m(row.q);
  const Rational frac = parse_rational(c.progression.length_fraction);
  const i64 L = static_cast<i64>(static_cast<__int128>(frac.numerator()) * row.q / frac.denominator());
  const ProgressionInterval iv{c.progression.start, L, c.progression.step, c.progression.offset};
  iv.validate_for_moments(row.q);
  const int max_r = *std::max_element(c.r_values.begin(), c.r_values.end());

  const double second = second_moment(iv, m);
  const double second_bound = second_moment_bound(iv, m);
  std::string fourth;
  std::string fourth_ratio;
  if (m.is_prime()) {
    const FourthMoment fm = fourth_moment_nonprincipal(iv, m);
    fourth = format_double(fm.value);
    fourth_ratio = format_double(fm.bound_ratio);
  }
  const PrincipalCount pc = principal_progression_count(iv, m);
  const NonprincipalMax nm = max_nonprincipal_sum(iv.K, iv.L, m, max_r);
  const double main = to_double(pc.main);
  row.fields = {std::to_string(m.phi()),
                std::to_string(iv.K),
                std::to_string(iv.L),
                std::to_string(iv.a),
                std::to_string(iv.b),
                format_double(second),
                format_double(second_bound),
                fourth,
                fourth_ratio,
                std::to_string(pc.exact),
                format_double(main),
                format_double(static_cast<double>(pc.exact) - main),
                std::to_string(pc.error_bound),
                format_double(nm.max_abs),
                format_double(nm.pv_ratio)};
  const std::string ivs = "ProgressionInterval{" + std::to_string(iv.K) + ", " + std::to_string(iv.L) + ", " +
                          std::to_string(iv.a) + ", " + std::to_string(iv.b) + "}";
  row.call = "second_moment(" + ivs + ", Modulus(" + std::to_string(row.q) + "))";
  row.command = "lehmerlab charsum --q " + std::to_string(row.q) + " --K " + std::to_string(iv.K) + " --L " +
                std::to_string(iv.L) + " --a " + std::to_string(iv.a) + " --b " + std::to_string(iv.b) +
                " --r " + std::to_string(max_r);
}

void discrepancy_row(const RunContext& ctx, ExperimentRow& row) {
  const auto& c = ctx.config;
  const LehmerInstance inst(Modulus(row.q), c.instance.k, c.instance.a, c.instance.b);
  const EnumerationOptions opts{c.budget.enumeration, 1};
  const PointSet points = c.instance.joint ? point_set_A(inst, opts) : point_set_B(inst, opts);
  DiscrepancyOptions dopt;
  dopt.exact_budget = c.budget.discrepancy_exact;
  dopt.samples = c.budget.discrepancy_samples;
  dopt.seed = splitmix64(c.seed ^ row.q);
  const DiscrepancyResult d = box_discrepancy(points, dopt);
  const double reg = region_discrepancy(points, *ctx.region);
  const double bound = lnw_transfer_bound(d.value, points.dimension(), linear_h(ctx.calibrated_c));
  const double ratio = bound > 0 ? reg / bound : (reg > 0 ? INFINITY : 0.0);
  const bool holds = reg <= c.transfer_constant * bound;
  row.fields = {std::to_string(c.instance.k),
                std::to_string(points.size()),
                std::to_string(points.dimension()),
                to_string(d.mode),
                format_double(d.value),
                format_double(reg),
                format_double(ctx.calibrated_c),
                format_double(bound),
                format_double(ratio),
                holds ? "1" : "0"};
  row.call = std::string("box_discrepancy(") + (c.instance.joint ? "point_set_A(" : "point_set_B(") +
             instance_call(c, row.q) + "))";
  row.command = "lehmerlab discrepancy " + instance_flags(c, row.q) + (c.instance.joint ? " --joint" : "") +
                " --seed " + std::to_string(dopt.seed);
  row.fit_x = ratio;
}

void hull_row(const RunContext&, ExperimentRow& row) {
  const Modulus m(row.q);
  const HullResult h = convex_hull_vertices(m);
  row.fields = {std::to_string(m.phi()), std::to_string(h.vertices)};
  row.call = "convex_hull_vertices(Modulus(" + std::to_string(row.q) + "))";
  row.command = "lehmerlab hull --q " + std::to_string(row.q);
}

void h_row(const RunContext&, ExperimentRow& row) {
  const Modulus m(row.q);
  const u64 h = inverse_spread(m);
  const double gap = static_cast<double>(row.q - h);
  const double ref = std::pow(static_cast<double>(row.q), 0.75);
  row.fields = {std::to_string(h), std::to_string(row.q - h), format_double(ref), format_double(gap / ref)};
  row.call = "inverse_spread(Modulus(" + std::to_string(row.q) + "))";
  row.command = "lehmerlab hq --q " + std::to_string(row.q);
  row.fit_x = static_cast<double>(row.q);
  row.fit_y = gap;
}

void compute_row(const RunContext& ctx, ExperimentRow& row) {
  switch (ctx.config.kind) {
    case ExperimentKind::CountScaling:
      return count_row(ctx, row);
    case ExperimentKind::CharsumMoments:
      return charsum_row(ctx, row);
    case ExperimentKind::DiscrepancyScan:
      return discrepancy_row(ctx, row);
    case ExperimentKind::HullScan:
      return hull_row(ctx, row);
    case ExperimentKind::HScan:
      return h_row(ctx, row);
  }
}

json exponent_summary(const ExperimentConfig& c) {
  json s;
  const unsigned k = c.instance.k;
  if (k >= 2) {
    json box;
    for (int r = 1; r <= 3; ++r) {
      const ErrorShape e = box_error_shape(k, r);
      box["r" + std::to_string(r)] = {{"second_exponent", format_rational(e.second_exponent)},
                                      {"product_power", format_rational(e.product_power)},
                                      {"second_exponent_value", to_double(e.second_exponent)}};
    }
    s["box_error_shape"] = box;
    s["threshold_exponent"] = format_rational(threshold_exponent(k));
  }
  if (k >= 3 && c.range.primes_only) {
    json prime;
    for (const int r : c.r_values) {
      const ErrorShape stated = prime_box_error_shape(k, r);
      const ErrorShape variant = prime_box_error_shape_variant(k, r);
      prime["r" + std::to_string(r)] = {{"stated_second_exponent", format_rational(stated.second_exponent)},
                                        {"variant_second_exponent", format_rational(variant.second_exponent)}};
    }
    s["prime_box_error_shape"] = prime;
  }
  return s;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::vector<u64> moduli = config.range.moduli();

  RunContext ctx{config, std::nullopt, std::nullopt, 1.0, 0.0};
  if (needs_instance(config.kind)) {
    const std::size_t dim = config.instance.joint ? config.instance.k + 1 : config.instance.k;
    if (config.instance.box) {
      ctx.box = parse_box(*config.instance.box);
      ctx.measure = to_double(ctx.box->measure());
    }
    if (config.instance.region) {
      ctx.region = parse_region(*config.instance.region, dim, config.budget.monte_carlo_samples, config.seed);
      ctx.measure = ctx.region->measure();
    }
    if (config.kind == ExperimentKind::DiscrepancyScan) {
      const std::size_t pdim = config.instance.joint ? config.instance.k + 1 : config.instance.k;
      if (!ctx.region) ctx.region = default_ball(pdim);
      if (ctx.region->dimension() != pdim) throw ConfigError("region dimension does not match the point sets");
      ctx.calibrated_c = calibrate_linear_constant(*ctx.region, config.budget.monte_carlo_samples / 5, config.seed);
    }
  }

  ExperimentReport report;
  report.config = config;
  report.rows.resize(moduli.size());
  for (std::size_t i = 0; i < moduli.size(); ++i) report.rows[i].q = moduli[i];

  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, moduli.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < moduli.size(); i = next++) {
      ExperimentRow& row = report.rows[i];
      try {
        compute_row(ctx, row);
      } catch (const CapacityError& e) {
        row.skipped = true;
        row.skip_reason = std::string("budget exceeded: ") + e.what();
      } catch (const DomainError& e) {
        row.skipped = true;
        row.skip_reason = std::string("not applicable: ") + e.what();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  json summary;
  if (config.kind == ExperimentKind::CountScaling || config.kind == ExperimentKind::HScan) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& row : report.rows) {
      if (row.skipped) continue;
      x.push_back(row.fit_x);
      y.push_back(row.fit_y);
    }
    try {
      report.fit = fit_exponent(x, y);
    } catch (const DomainError& e) {
      summary["fit_unavailable"] = e.what();
    }
  }
  if (config.kind == ExperimentKind::CountScaling) {
    summary["reference_exponents"] = exponent_summary(config);
    summary["measure"] = ctx.measure;
  } else if (config.kind == ExperimentKind::HScan) {
    summary["reference_exponent"] = "3/4";
  } else if (config.kind == ExperimentKind::DiscrepancyScan) {
    double max_ratio = 0;
    bool all_hold = true;
    for (const auto& row : report.rows) {
      if (row.skipped) continue;
      max_ratio = std::max(max_ratio, row.fit_x);
      all_hold = all_hold && row.fields.back() == "1";
    }
    summary["region"] = ctx.region->describe();
    summary["calibrated_C"] = ctx.calibrated_c;
    summary["transfer_constant"] = config.transfer_constant;
    summary["max_ratio"] = max_ratio;
    summary["all_hold"] = all_hold;
  }
  report.summary = summary;
  return report;
}

std::string ExperimentReport::csv() const {
  std::ostringstream os;
  const auto cols = csv_columns(config.kind);
  os << join(cols) << '\n';
  const std::string kind = to_string(config.kind);
  for (const auto& row : rows) {
    os << kCsvSchemaVersion << ',' << kind << ',' << row.q;
    for (std::size_t i = 3; i < cols.size(); ++i) {
      os << ',' << (row.skipped ? std::string("skipped") : row.fields.at(i - 3));
    }
    os << '\n';
  }
  return os.str();
}

json ExperimentReport::sidecar() const {
  json j;
  j["schema_version"] = kCsvSchemaVersion;
  j["experiment"] = to_string(config.kind);
  j["config"] = config_to_json(config);
  j["seed"] = config.seed;
  j["columns"] = csv_columns(config.kind);
  json rows_json = json::array();
  json skipped = json::array();
  for (const auto& row : rows) {
    if (row.skipped) {
      skipped.push_back({{"q", row.q}, {"reason", row.skip_reason}});
    } else {
      rows_json.push_back({{"q", row.q}, {"rederive", row.call}, {"command", row.command}});
    }
  }
  j["rows"] = rows_json;
  j["skipped"] = skipped;
  if (fit) {
    j["fit"] = {{"slope", fit->slope}, {"intercept", fit->intercept}, {"residual", fit->residual}, {"rows", fit->rows}};
  } else {
    j["fit"] = nullptr;
  }
  j["summary"] = summary;
  return j;
}

std::string sidecar_path(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return csv_path.substr(0, dot) + ".json";
  }
  return csv_path + ".json";
}

void write_report(const ExperimentReport& report) {
  const std::string& path = report.config.output;
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << report.csv();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
  }
  const std::string side = sidecar_path(path);
  std::ofstream out(side, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + side + "'");
  out << report.sidecar().dump(2) << '\n';
  if (!out) throw std::runtime_error("write to '" + side + "' failed");
}

}  // namespace lehmerlab
