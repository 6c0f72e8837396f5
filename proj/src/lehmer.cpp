#include "lehmerlab/lehmer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "lehmerlab/charsums.hpp"
#include "lehmerlab/errors.hpp"

namespace lehmerlab {

LehmerInstance::LehmerInstance(Modulus modulus, unsigned k, std::vector<u64> a, std::vector<i64> b)
    : modulus_(std::move(modulus)), k_(k), a_(std::move(a)) {
  if (k_ < 1) throw DomainError("LehmerInstance: k must be >= 1");
  if (a_.size() != k_ + 1 || b.size() != k_ + 1) {
    throw DomainError("LehmerInstance: a and b need exactly k+1 = " + std::to_string(k_ + 1) + " entries");
  }
  const u64 q = modulus_.value();
  for (const u64 ai : a_) {
    if (ai < 1 || ai >= q || std::gcd(ai, q) != 1) {
      throw DomainError("LehmerInstance: a_i = " + std::to_string(ai) + " is not a unit in [1, " +
                        std::to_string(q) + ")");
    }
  }
  b_.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) b_[i] = reduce_mod(b[i], a_[i]);
}

long double LehmerInstance::a_product() const {
  long double p = 1.0L;
  for (const u64 ai : a_) p *= static_cast<long double>(ai);
  return p;
}

double LehmerInstance::a_norm() const {
  long double s = 0.0L;
  for (const u64 ai : a_) s += static_cast<long double>(ai) * static_cast<long double>(ai);
  return static_cast<double>(std::sqrt(s));
}

namespace {

struct Plan {
  u64 q = 0;
  std::vector<std::vector<u64>> lists;  // admissible values of n_1..n_k
  std::vector<std::uint8_t> accept;     // accept[x]: inv(x) passes the last coordinate's tests
  double cost = 0.0;
};

Plan make_plan(const LehmerInstance& inst, const Box* box) {
  const u64 q = inst.q();
  const unsigned k = inst.k();
  if (box != nullptr && box->dimension() != k + 1) {
    throw DomainError("box dimension " + std::to_string(box->dimension()) + " does not match k+1 = " +
                      std::to_string(k + 1));
  }
  const auto& m = inst.modulus();
  auto range = [&](std::size_t axis) -> std::pair<u64, u64> {
    if (box == nullptr) return {1, q};
    const auto [lo, hi] = box->dilated_range(axis, q);
    return {static_cast<u64>(std::max<i64>(lo, 1)), static_cast<u64>(std::min<i64>(hi, static_cast<i64>(q)))};
  };

  Plan plan;
  plan.q = q;
  plan.cost = 1.0;
  for (unsigned i = 0; i < k; ++i) {
    const auto [lo, hi] = range(i);
    std::vector<u64> values;
    const u64 a = inst.a()[i];
    const u64 b = inst.b()[i];
    if (lo < hi) {
      u64 n = lo + (b + a - lo % a) % a;
      for (; n < hi; n += a) {
        if (m.is_unit(n)) values.push_back(n);
      }
    }
    plan.cost *= static_cast<double>(values.size());
    plan.lists.push_back(std::move(values));
  }
  const auto [lo, hi] = range(k);
  const u64 a = inst.a()[k];
  const u64 b = inst.b()[k];
  const auto inv = m.inverse_table();
  plan.accept.assign(q, 0);
  for (u64 x = 1; x < q; ++x) {
    const u64 y = inv[x];
    if (y != 0 && y >= lo && y < hi && y % a == b) plan.accept[x] = 1;
  }
  return plan;
}

void check_budget(const Plan& plan, const EnumerationOptions& options) {
  if (plan.cost > options.budget) {
    throw CapacityError("enumeration needs " + std::to_string(plan.cost) + " tuples, budget is " +
                        std::to_string(options.budget));
  }
}

u64 count_from(const Plan& p, std::size_t depth, u64 prefix) {
  const auto& list = p.lists[depth];
  u64 c = 0;
  if (depth + 1 == p.lists.size()) {
    const std::uint8_t* accept = p.accept.data();
    const u64 q = p.q;
    for (const u64 n : list) c += accept[prefix * n % q];
    return c;
  }
  for (const u64 n : list) c += count_from(p, depth + 1, prefix * n % p.q);
  return c;
}

u64 count_plan(const Plan& p, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto& outer = p.lists.front();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, outer.size())));
  auto work = [&p, &outer](std::size_t start, std::size_t stride) {
    u64 c = 0;
    for (std::size_t i = start; i < outer.size(); i += stride) {
      c += p.lists.size() == 1 ? p.accept[outer[i]] : count_from(p, 1, outer[i]);
    }
    return c;
  };
  if (threads <= 1) return work(0, 1);
  std::vector<u64> partial(threads, 0);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] { partial[t] = work(t, threads); });
    }
  }
  return std::accumulate(partial.begin(), partial.end(), u64{0});
}

}  // namespace

double enumeration_cost(const LehmerInstance& inst, const Box* box) { return make_plan(inst, box).cost; }

u64 enumerate_N(const LehmerInstance& inst, const EnumerationOptions& options) {
  const Plan plan = make_plan(inst, nullptr);
  check_budget(plan, options);
  return count_plan(plan, options.threads);
}

void for_each_tuple(const LehmerInstance& inst, const std::function<void(std::span<const u64>, u64)>& visit,
                    const EnumerationOptions& options, const Box* box) {
  const Plan plan = make_plan(inst, box);
  check_budget(plan, options);
  const auto inv = inst.modulus().inverse_table();
  const u64 q = plan.q;
  std::vector<u64> tuple(plan.lists.size());
  auto recurse = [&](auto&& self, std::size_t depth, u64 prefix) -> void {
    for (const u64 n : plan.lists[depth]) {
      tuple[depth] = n;
      const u64 prod = prefix * n % q;
      if (depth + 1 == plan.lists.size()) {
        if (plan.accept[prod]) visit(tuple, inv[prod]);
      } else {
        self(self, depth + 1, prod);
      }
    }
  };
  recurse(recurse, 0, 1);
}

u64 count_M_box(const LehmerInstance& inst, const Box& box, const EnumerationOptions& options) {
  const Plan plan = make_plan(inst, &box);
  check_budget(plan, options);
  return count_plan(plan, options.threads);
}

u64 count_M_box_charsum(const LehmerInstance& inst, const Box& box) {
  const u64 q = inst.q();
  const unsigned k = inst.k();
  if (box.dimension() != k + 1) throw DomainError("count_M_box_charsum: box dimension must be k+1");
  const auto& m = inst.modulus();

  std::vector<std::vector<std::complex<double>>> edge_sums;
  for (unsigned nu = 0; nu <= k; ++nu) {
    const auto [lo_raw, hi] = box.dilated_range(nu, q);
    // n = 0 is never a unit, so the range can start at 1
    const i64 lo = std::max<i64>(lo_raw, 1);
    if (hi <= lo) return 0;
    const ProgressionInterval iv{lo - 1, hi - lo, static_cast<i64>(inst.a()[nu]), static_cast<i64>(inst.b()[nu])};
    edge_sums.push_back(progression_char_sums(m, iv));
  }

  std::complex<double> total{0.0, 0.0};
  for (u64 idx = 0; idx < m.phi(); ++idx) {
    std::complex<double> prod = edge_sums[0][idx];
    for (unsigned nu = 1; nu <= k; ++nu) prod *= edge_sums[nu][idx];
    total += prod;
  }
  total /= static_cast<double>(m.phi());
  const double rounded = std::round(total.real());
  if (std::abs(total.real() - rounded) > 0.1 || std::abs(total.imag()) > 0.1) {
    throw PrecisionError("count_M_box_charsum: character sum " + std::to_string(total.real()) + " + " +
                         std::to_string(total.imag()) + "i is not within 0.1 of an integer");
  }
  return static_cast<u64>(rounded);
}

double main_term(const LehmerInstance& inst, double measure) {
  if (measure < 0.0 || measure > 1.0) throw DomainError("main_term: measure must lie in [0, 1]");
  const long double phi = static_cast<long double>(inst.modulus().phi());
  return static_cast<double>(measure * std::pow(phi, static_cast<long double>(inst.k())) / inst.a_product());
}

u64 count_region(const LehmerInstance& inst, const RegionSpec& region, bool joint,
                 const EnumerationOptions& options) {
  const std::size_t dim = joint ? inst.k() + 1 : inst.k();
  if (region.dimension() != dim) {
    throw DomainError("count_region: region dimension " + std::to_string(region.dimension()) +
                      " but expected " + std::to_string(dim));
  }
  const double q = static_cast<double>(inst.q());
  std::vector<double> x(dim);
  u64 count = 0;
  for_each_tuple(
      inst,
      [&](std::span<const u64> n, u64 inv) {
        for (std::size_t i = 0; i < n.size(); ++i) x[i] = static_cast<double>(n[i]) / q;
        if (joint) x.back() = static_cast<double>(inv) / q;
        if (region.contains(x)) ++count;
      },
      options);
  return count;
}

namespace {

PointSet collect_points(const LehmerInstance& inst, bool with_inverse, const EnumerationOptions& options) {
  const std::size_t dim = with_inverse ? inst.k() + 1 : inst.k();
  std::vector<u64> numerators;
  for_each_tuple(
      inst,
      [&](std::span<const u64> n, u64 inv) {
        numerators.insert(numerators.end(), n.begin(), n.end());
        if (with_inverse) numerators.push_back(inv);
      },
      options);
  if (numerators.empty()) throw DomainError("point set of an empty N(a, b, q)");
  return PointSet::lattice(dim, inst.q(), std::move(numerators));
}

}  // namespace

PointSet point_set_A(const LehmerInstance& inst, const EnumerationOptions& options) {
  return collect_points(inst, true, options);
}

PointSet point_set_B(const LehmerInstance& inst, const EnumerationOptions& options) {
  return collect_points(inst, false, options);
}

u64 h_statistic(const LehmerInstance& inst, const EnumerationOptions& options) {
  bool any = false;
  u64 best = 0;
  for_each_tuple(
      inst,
      [&](std::span<const u64> n, u64 inv) {
        u64 closest = ~u64{0};
        for (const u64 ni : n) closest = std::min(closest, ni > inv ? ni - inv : inv - ni);
        best = any ? std::max(best, closest) : closest;
        any = true;
      },
      options);
  if (!any) throw DomainError("h_statistic: N(a, b, q) is empty, H is undefined");
  return best;
}

u64 inverse_spread(const Modulus& modulus) {
  const auto inv = modulus.inverse_table();
  u64 best = 0;
  for (u64 n = 1; n < modulus.value(); ++n) {
    if (inv[n] == 0) continue;
    best = std::max<u64>(best, n > inv[n] ? n - inv[n] : inv[n] - n);
  }
  return best;
}

}  // namespace lehmerlab
