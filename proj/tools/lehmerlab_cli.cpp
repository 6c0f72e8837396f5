#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lehmerlab/charsums.hpp"
#include "lehmerlab/discrepancy.hpp"
#include "lehmerlab/errors.hpp"
#include "lehmerlab/experiment.hpp"
#include "lehmerlab/exponents.hpp"
#include "lehmerlab/hull.hpp"
#include "lehmerlab/lehmer.hpp"
#include "lehmerlab/region.hpp"

using namespace lehmerlab;
using ordered_json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kIo = 1, kConfig = 2, kCapacity = 3, kPrecision = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      if constexpr (std::is_unsigned_v<T>) {
        if (v < 0) throw std::invalid_argument(item);
      }
      out.push_back(static_cast<T>(v));
    } catch (const std::logic_error&) {
      throw ConfigError(std::string(what) + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + " is empty");
  return out;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell(const ordered_json& v) {
  if (v.is_string()) return quoted(v.get<std::string>());
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

// A single flat record printed as a two-line CSV or a JSON object.
void emit(const ordered_json& record, const std::string& format, const std::string& out_path) {
  std::ostringstream os;
  if (format == "json") {
    os << record.dump(2) << '\n';
  } else {
    bool first = true;
    for (const auto& [key, value] : record.items()) {
      os << (first ? "" : ",") << key;
      first = false;
    }
    os << '\n';
    first = true;
    for (const auto& [key, value] : record.items()) {
      os << (first ? "" : ",") << cell(value);
      first = false;
    }
    os << '\n';
  }
  if (out_path.empty()) {
    std::cout << os.str();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << os.str())) throw IoError("cannot write '" + out_path + "'");
}

struct InstanceArgs {
  u64 q = 0;
  unsigned k = 1;
  std::string a;
  std::string b;

  LehmerInstance build() const {
    std::vector<u64> av = a.empty() ? std::vector<u64>(k + 1, 1) : parse_list<u64>(a, "--a");
    std::vector<i64> bv = b.empty() ? std::vector<i64>(k + 1, 0) : parse_list<i64>(b, "--b");
    return LehmerInstance(Modulus(q), k, std::move(av), std::move(bv));
  }
};

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--q", args.q, "modulus")->required();
  cmd->add_option("--k", args.k, "number of free variables")->default_val(1);
  cmd->add_option("--a", args.a, "k+1 comma-separated moduli a_i (default all 1)");
  cmd->add_option("--b", args.b, "k+1 comma-separated residues b_i (default all 0)");
}

ordered_json run_count(const InstanceArgs& ia, const std::string& box_text, const std::string& region_text,
                       bool joint, const std::string& method, double budget, std::uint64_t seed,
                       const std::string& r_text) {
  const LehmerInstance inst = ia.build();
  const EnumerationOptions opts{budget, 0};
  ordered_json rec;
  rec["q"] = inst.q();
  rec["k"] = inst.k();
  double measure = 1.0;
  u64 observed = 0;
  if (!region_text.empty()) {
    if (!box_text.empty()) throw ConfigError("--box and --region are mutually exclusive");
    if (method != "enumerate") throw ConfigError("--method charsum needs a box");
    const RegionSpec region = parse_region(region_text, joint ? inst.k() + 1 : inst.k(),
                                           RegionSpec::kDefaultSamples, seed);
    measure = region.measure();
    observed = count_region(inst, region, joint, opts);
    rec["region"] = region.describe();
    rec["measure_exact"] = region.measure_is_exact();
  } else {
    const Box box = box_text.empty() ? Box::unit(inst.k() + 1) : parse_box(box_text);
    measure = to_double(box.measure());
    if (method == "enumerate" || method == "both") observed = count_M_box(inst, box, opts);
    if (method == "charsum" || method == "both") {
      const u64 via_chars = count_M_box_charsum(inst, box);
      if (method == "both") {
        rec["charsum"] = via_chars;
        rec["agree"] = via_chars == observed;
      } else {
        observed = via_chars;
      }
    }
    rec["box"] = box.to_string();
  }
  const double main = main_term(inst, measure);
  rec["measure"] = measure;
  rec["observed"] = observed;
  rec["main"] = main;
  rec["error"] = static_cast<double>(observed) - main;
  if (inst.k() >= 2) {
    const std::vector<int> rs = r_text.empty() ? std::vector<int>{1, 2, 3} : parse_list<int>(r_text, "--r");
    for (const int r : rs) rec["shape_r" + std::to_string(r)] = error_term_thm1(inst, r);
    if (inst.modulus().is_prime() && inst.k() >= 3) {
      for (const int r : rs) rec["prime_shape_r" + std::to_string(r)] = error_term_thm4(inst, r);
    }
  }
  return rec;
}

ordered_json run_charsum(u64 q, i64 K, i64 L, i64 a, i64 b, int max_r) {
  const Modulus m(q);
  const ProgressionInterval iv{K, L, a, b};
  iv.validate_for_moments(q);
  ordered_json rec;
  rec["q"] = q;
  rec["phi"] = m.phi();
  rec["K"] = K;
  rec["L"] = L;
  rec["a"] = a;
  rec["b"] = b;
  rec["second_moment"] = second_moment(iv, m);
  rec["second_moment_bound"] = second_moment_bound(iv, m);
  if (m.is_prime()) {
    const FourthMoment fm = fourth_moment_nonprincipal(iv, m);
    rec["fourth_moment"] = fm.value;
    rec["fourth_bound_ratio"] = fm.bound_ratio;
  }
  const PrincipalCount pc = principal_progression_count(iv, m);
  rec["principal_exact"] = pc.exact;
  rec["principal_main"] = format_rational(pc.main);
  rec["erat_bound"] = pc.error_bound;
  const NonprincipalMax nm = max_nonprincipal_sum(K, L, m, max_r);
  rec["max_nonprincipal"] = nm.max_abs;
  rec["pv_ratio"] = nm.pv_ratio;
  for (const auto& br : nm.burgess) rec["burgess_ratio_r" + std::to_string(br.r)] = br.ratio;
  const ProgressionBoundReport pr = progression_bound_report(iv, m, max_r);
  rec["progression_max"] = pr.max_abs;
  for (const auto& br : pr.shapes) rec["progression_ratio_r" + std::to_string(br.r)] = br.ratio;
  rec["a_at_least_L"] = pr.a_at_least_L;
  rec["a_at_most_L"] = pr.a_at_most_L;
  return rec;
}

ordered_json run_discrepancy(const InstanceArgs& ia, const std::string& region_text, bool joint,
                             const std::string& mode, double budget, std::uint64_t samples, std::uint64_t seed) {
  const LehmerInstance inst = ia.build();
  const PointSet points = joint ? point_set_A(inst) : point_set_B(inst);
  DiscrepancyOptions opt;
  if (mode == "exact") {
    opt.mode = DiscrepancyMode::Exact;
  } else if (mode == "sampled") {
    opt.mode = DiscrepancyMode::Sampled;
  } else if (mode != "auto") {
    throw ConfigError("--mode must be auto, exact or sampled");
  }
  if (budget > 0) opt.exact_budget = budget;
  opt.samples = samples;
  opt.seed = seed;
  const std::size_t s = points.dimension();
  const RegionSpec region = region_text.empty() ? RegionSpec::ball(std::vector<double>(s, 0.5), 0.25)
                                                : parse_region(region_text, s, RegionSpec::kDefaultSamples, seed);
  const DiscrepancyResult d = box_discrepancy(points, opt);
  const double reg = region_discrepancy(points, region);
  const double c = calibrate_linear_constant(region, 200'000, seed);
  const double bound = lnw_transfer_bound(d.value, s, linear_h(c));
  ordered_json rec;
  rec["q"] = inst.q();
  rec["k"] = inst.k();
  rec["points"] = points.size();
  rec["dimension"] = s;
  rec["mode"] = to_string(d.mode);
  rec["box_discrepancy"] = d.value;
  rec["box_discrepancy_fraction"] =
      d.fraction ? std::to_string(d.fraction->first) + "/" + std::to_string(d.fraction->second) : std::string();
  rec["seed"] = d.seed;
  rec["samples"] = d.samples;
  rec["region"] = region.describe();
  rec["region_discrepancy"] = reg;
  rec["calibrated_C"] = c;
  rec["transfer_bound"] = bound;
  rec["ratio"] = bound > 0 ? reg / bound : 0.0;
  return rec;
}

ordered_json run_hull(u64 q, bool with_points) {
  const HullResult h = convex_hull_vertices(Modulus(q));
  ordered_json rec;
  rec["q"] = q;
  rec["V"] = h.vertices;
  if (with_points) {
    std::ostringstream os;
    for (std::size_t i = 0; i < h.hull.size(); ++i) {
      os << (i ? " " : "") << h.hull[i].x << ':' << h.hull[i].y;
    }
    rec["vertices"] = os.str();
  }
  return rec;
}

ordered_json run_hq(u64 q) {
  const u64 h = inverse_spread(Modulus(q));
  ordered_json rec;
  rec["q"] = q;
  rec["H"] = h;
  rec["q_minus_H"] = q - h;
  rec["ratio_to_q_3_4"] = static_cast<double>(q - h) / std::pow(static_cast<double>(q), 0.75);
  return rec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting and discrepancy experiments for modular inverses in progressions"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = RegionSpec::kDefaultSeed;
  double budget = 0.0;
  std::string r_text;
  std::string box_text;
  std::string region_text;
  bool joint = false;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", out_path, "write to this file instead of stdout");
    cmd->add_option("--seed", seed, "seed for Monte Carlo and sampled modes");
    cmd->add_option("--budget", budget, "work budget (tuples for counts, critical boxes for discrepancy)");
  };

  InstanceArgs count_args;
  std::string method = "enumerate";
  auto* count = app.add_subcommand("count", "count tuples of N(a,b,q) in a box or region");
  add_instance_options(count, count_args);
  count->add_option("--box", box_text, "box lo:hi,... with k+1 axes (default the full cube)");
  count->add_option("--region", region_text, "region full|empty|box:...|ball:c1,...:r");
  count->add_flag("--joint", joint, "region includes the inverse coordinate (dimension k+1)");
  count->add_option("--method", method, "enumerate, charsum or both")
      ->check(CLI::IsMember({"enumerate", "charsum", "both"}));
  count->add_option("--r", r_text, "comma-separated Burgess parameters for the error shapes");
  common(count);

  u64 cq = 0;
  i64 K = 0;
  i64 L = 0;
  i64 step = 1;
  i64 offset = 0;
  int max_r = 3;
  auto* charsum = app.add_subcommand("charsum", "character sums over a progression interval");
  charsum->add_option("--q", cq, "modulus")->required();
  charsum->add_option("--K", K, "interval starts after K")->default_val(0);
  charsum->add_option("--L", L, "interval length")->required();
  charsum->add_option("--a", step, "progression step")->default_val(1);
  charsum->add_option("--b", offset, "progression residue")->default_val(0);
  charsum->add_option("--r", max_r, "largest Burgess parameter reported")->default_val(3);
  common(charsum);

  InstanceArgs disc_args;
  std::string mode = "auto";
  std::uint64_t samples = 100'000;
  auto* disc = app.add_subcommand("discrepancy", "box, region discrepancy and transfer bound of A or B");
  add_instance_options(disc, disc_args);
  disc->add_option("--region", region_text, "region for the region discrepancy (default centred ball)");
  disc->add_flag("--joint", joint, "use A (with the inverse coordinate) instead of B");
  disc->add_option("--mode", mode, "auto, exact or sampled");
  disc->add_option("--samples", samples, "random boxes in sampled mode");
  common(disc);

  u64 hq_q = 0;
  bool with_points = false;
  auto* hull = app.add_subcommand("hull", "convex hull of N(q) and its vertex count V(q)");
  hull->add_option("--q", hq_q, "modulus")->required();
  hull->add_flag("--points", with_points, "include the hull vertices");
  common(hull);

  auto* hq = app.add_subcommand("hq", "H(q), the largest |n - inv(n)|");
  hq->add_option("--q", hq_q, "modulus")->required();
  common(hq);

  std::string config_path;
  bool has_seed_override = false;
  auto* exp = app.add_subcommand("experiment", "run an experiment from a JSON config");
  exp->add_option("config", config_path, "config file")->required();
  exp->add_option("--out", out_path, "CSV output path (overrides the config)");
  exp->add_option("--seed", seed, "seed (overrides the config)")->each([&](const std::string&) {
    has_seed_override = true;
  });
  exp->add_option("--format", format, "format of the summary printed to stdout")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*count) {
      emit(run_count(count_args, box_text, region_text, joint, method, budget > 0 ? budget : 4e9, seed, r_text),
           format, out_path);
    } else if (*charsum) {
      emit(run_charsum(cq, K, L, step, offset, max_r), format, out_path);
    } else if (*disc) {
      emit(run_discrepancy(disc_args, region_text, joint, mode, budget, samples, seed), format, out_path);
    } else if (*hull) {
      emit(run_hull(hq_q, with_points), format, out_path);
    } else if (*hq) {
      emit(run_hq(hq_q), format, out_path);
    } else if (*exp) {
      ExperimentConfig config = load_config(config_path);
      if (!out_path.empty()) config.output = out_path;
      if (has_seed_override) config.seed = seed;
      const ExperimentReport report = run_experiment(config);
      try {
        write_report(report);
      } catch (const std::runtime_error& e) {
        throw IoError(e.what());
      }
      ordered_json rec;
      rec["experiment"] = to_string(config.kind);
      rec["rows"] = report.rows.size();
      std::size_t skipped = 0;
      for (const auto& row : report.rows) skipped += row.skipped ? 1 : 0;
      rec["skipped"] = skipped;
      rec["csv"] = config.output;
      rec["sidecar"] = sidecar_path(config.output);
      if (report.fit) {
        rec["slope"] = report.fit->slope;
        rec["residual"] = report.fit->residual;
      }
      emit(rec, format, "");
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const CapacityError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kCapacity;
  } catch (const PrecisionError& e) {
    std::cerr << "precision error: " << e.what() << '\n';
    return kPrecision;
  }
  return kOk;
}
