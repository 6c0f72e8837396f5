#include "lehmerlab/charsums.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lehmerlab/errors.hpp"

namespace lehmerlab {

namespace {

i64 floor_div(i64 x, i64 y) {
  i64 q = x / y;
  if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
  return q;
}

i64 ceil_div(i64 x, i64 y) { return -floor_div(-x, y); }

// Neumaier summation over complex values.
class CompensatedSum {
 public:
  void add(std::complex<double> v) {
    add_part(sum_re_, comp_re_, v.real());
    add_part(sum_im_, comp_im_, v.imag());
  }
  std::complex<double> value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double sum_re_ = 0.0, comp_re_ = 0.0, sum_im_ = 0.0, comp_im_ = 0.0;
};

template <class Value>
std::complex<double> accumulate_progression(i64 first, i64 step, i64 count, Value&& value) {
  if (count >= kCompensatedThreshold) {
    CompensatedSum acc;
    for (i64 t = 0; t < count; ++t) acc.add(value(first + t * step));
    return acc.value();
  }
  std::complex<double> acc{0.0, 0.0};
  for (i64 t = 0; t < count; ++t) acc += value(first + t * step);
  return acc;
}

void require_coprime(i64 a, const Modulus& m, const char* where) {
  if (std::gcd(static_cast<u64>(a), m.value()) != 1) {
    throw DomainError(std::string(where) + ": gcd(a, q) must be 1, a = " + std::to_string(a));
  }
}

}  // namespace

i64 ProgressionInterval::term_count() const {
  validate();
  return floor_div(K + L - b, a) - floor_div(K - b, a);
}

i64 ProgressionInterval::first_term() const {
  validate();
  return a * ceil_div(K + 1 - b, a) + b;
}

void ProgressionInterval::validate() const {
  if (L < 1) throw DomainError("ProgressionInterval: L must be >= 1");
  if (a < 1) throw DomainError("ProgressionInterval: a must be >= 1");
}

void ProgressionInterval::validate_for_moments(u64 q) const {
  validate();
  if (K < 0 || K + L > static_cast<i64>(q)) {
    throw DomainError("ProgressionInterval: need 0 <= K < K+L <= q");
  }
  if (std::gcd(static_cast<u64>(a), q) != 1) throw DomainError("ProgressionInterval: gcd(a, q) must be 1");
}

std::complex<double> progression_char_sum(const DirichletCharacter& chi, const ProgressionInterval& iv) {
  const u64 q = chi.modulus().value();
  return accumulate_progression(iv.first_term(), iv.a, iv.term_count(),
                                [&](i64 n) { return chi.value(reduce_mod(n, q)); });
}

std::vector<std::complex<double>> progression_char_sums(const Modulus& m, const ProgressionInterval& iv) {
  const u64 q = m.value();
  const u64 L = m.exponent();
  const auto comps = m.components();
  const std::size_t rank = comps.size();

  // multiplicity of each residue class hit by the progression
  std::vector<i64> mult(q, 0);
  const i64 count = iv.term_count();
  const i64 first = iv.first_term();
  if (count > static_cast<i64>(q)) {
    // whole periods contribute uniformly; only the remainder is walked
    const i64 period = static_cast<i64>(q);
    const i64 full = count / period;
    for (i64 t = 0; t < period; ++t) mult[reduce_mod(first + t * iv.a, q)] += full;
    for (i64 t = full * period; t < count; ++t) ++mult[reduce_mod(first + t * iv.a, q)];
  } else {
    for (i64 t = 0; t < count; ++t) ++mult[reduce_mod(first + t * iv.a, q)];
  }

  struct Hit {
    std::vector<u64> step;  // phase increment per unit step of e_j
    double weight;
    u64 phase;
  };
  std::vector<Hit> hits;
  for (u64 n = 1; n < q; ++n) {
    if (mult[n] == 0 || !m.is_unit(n)) continue;
    const auto d = m.dlog(n);
    Hit h{std::vector<u64>(rank), static_cast<double>(mult[n]), 0};
    for (std::size_t j = 0; j < rank; ++j) h.step[j] = d[j] * (L / comps[j].order) % L;
    hits.push_back(std::move(h));
  }

  std::vector<std::complex<double>> sums(m.phi());
  std::vector<std::uint32_t> e(rank, 0);
  for (u64 idx = 0; idx < m.phi(); ++idx) {
    std::complex<double> s{0.0, 0.0};
    for (const auto& h : hits) s += h.weight * m.root(h.phase);
    sums[idx] = s;
    // advance the exponent odometer, last component fastest
    for (std::size_t j = rank; j-- > 0;) {
      if (++e[j] < comps[j].order) {
        for (auto& h : hits) h.phase = (h.phase + h.step[j]) % L;
        break;
      }
      e[j] = 0;
      for (auto& h : hits) h.phase = (h.phase + L - h.step[j] * (comps[j].order - 1) % L) % L;
    }
  }
  return sums;
}

ShiftIdentity shift_identity(const DirichletCharacter& chi, const ProgressionInterval& iv) {
  const Modulus& m = chi.modulus();
  const u64 q = m.value();
  require_coprime(iv.a, m, "shift_identity");
  ShiftIdentity out;
  out.direct = progression_char_sum(chi, iv);
  out.terms = iv.term_count();

  const u64 a_inv = m.inverse(reduce_mod(iv.a, q));
  const u64 shift = mul_mod(reduce_mod(iv.b, q), a_inv, q);
  const i64 m_lo = ceil_div(iv.K + 1 - iv.b, iv.a);
  const i64 m_hi = floor_div(iv.K + iv.L - iv.b, iv.a);
  const std::complex<double> chi_a = chi.value(reduce_mod(iv.a, q));
  const std::complex<double> inner = accumulate_progression(
      m_lo, 1, std::max<i64>(0, m_hi - m_lo + 1),
      [&](i64 mm) { return chi.value((reduce_mod(mm, q) + shift) % q); });
  out.shifted = chi_a * inner;
  out.holds = std::abs(out.direct - out.shifted) <= 1e-9 * static_cast<double>(std::max<i64>(1, out.terms));
  return out;
}

bool shift_identity_check(const DirichletCharacter& chi, const ProgressionInterval& iv) {
  return shift_identity(chi, iv).holds;
}

double second_moment(const ProgressionInterval& iv, const Modulus& modulus) {
  iv.validate_for_moments(modulus.value());
  double total = 0.0;
  for (const auto& s : progression_char_sums(modulus, iv)) total += std::norm(s);
  return total;
}

double second_moment_bound(const ProgressionInterval& iv, const Modulus& modulus) {
  return static_cast<double>(modulus.phi()) *
         (static_cast<double>(iv.L) / static_cast<double>(iv.a) + 1.0);
}

FourthMoment fourth_moment_nonprincipal(const ProgressionInterval& iv, const Modulus& prime_modulus) {
  if (!prime_modulus.is_prime()) {
    throw DomainError("fourth_moment_nonprincipal: modulus " + std::to_string(prime_modulus.value()) +
                      " is not prime");
  }
  iv.validate_for_moments(prime_modulus.value());
  const auto sums = progression_char_sums(prime_modulus, iv);
  FourthMoment out;
  for (std::size_t i = 1; i < sums.size(); ++i) {
    const double n2 = std::norm(sums[i]);
    out.value += n2 * n2;
  }
  const double p = static_cast<double>(prime_modulus.value());
  const double spread = static_cast<double>(iv.L) / static_cast<double>(iv.a) + 1.0;
  const double logp = std::log(p);
  out.bound_ratio = out.value / (p * spread * spread * logp * logp);
  return out;
}

PrincipalCount principal_progression_count(const ProgressionInterval& iv, const Modulus& modulus) {
  iv.validate();
  require_coprime(iv.a, modulus, "principal_progression_count");
  const u64 q = modulus.value();
  PrincipalCount out;
  for (const u64 d : squarefree_divisors(q)) {
    const int mu = mobius(d);
    // n = b (mod a) and n = 0 (mod d) combine to n = c (mod a d)
    const i64 ad = iv.a * static_cast<i64>(d);
    i64 c = 0;
    if (iv.a > 1) {
      const u64 d_inv = mod_inverse(d % static_cast<u64>(iv.a), static_cast<u64>(iv.a));
      const u64 t = mul_mod(reduce_mod(iv.b, static_cast<u64>(iv.a)), d_inv, static_cast<u64>(iv.a));
      c = static_cast<i64>(d * t);
    }
    const i64 hits = floor_div(iv.K + iv.L - c, ad) - floor_div(iv.K - c, ad);
    out.exact += mu * hits;
  }
  __int128 num = static_cast<__int128>(modulus.phi()) * iv.L;
  __int128 den = static_cast<__int128>(iv.a) * q;
  __int128 x = num < 0 ? -num : num, y = den;
  while (y != 0) {
    const __int128 t = x % y;
    x = y;
    y = t;
  }
  out.main = Rational(static_cast<i64>(num / x), static_cast<i64>(den / x));
  out.error_bound = i64{1} << modulus.factorization().omega();
  return out;
}

namespace {

std::vector<int> admissible_r(const Modulus& m, int max_r) {
  std::vector<int> rs;
  for (int r = 1; r <= max_r; ++r) {
    if (r >= 4 && !m.is_prime()) break;
    rs.push_back(r);
  }
  return rs;
}

double max_nonprincipal(const std::vector<std::complex<double>>& sums) {
  double best = 0.0;
  for (std::size_t i = 1; i < sums.size(); ++i) best = std::max(best, std::abs(sums[i]));
  return best;
}

}  // namespace

NonprincipalMax max_nonprincipal_sum(i64 U, i64 V, const Modulus& modulus, int max_r) {
  const double q = static_cast<double>(modulus.value());
  if (V < 1 || V > static_cast<i64>(modulus.value())) throw DomainError("max_nonprincipal_sum: need 1 <= V <= q");
  if (U < 0) throw DomainError("max_nonprincipal_sum: U must be >= 0");
  NonprincipalMax out;
  out.max_abs = max_nonprincipal(progression_char_sums(modulus, {U, V, 1, 0}));
  out.pv_ratio = out.max_abs / (std::sqrt(q) * std::log(q));
  for (const int r : admissible_r(modulus, max_r)) {
    const double rr = r;
    const double bound = std::pow(static_cast<double>(V), 1.0 - 1.0 / rr) * std::pow(q, (rr + 1.0) / (4.0 * rr * rr));
    out.burgess.push_back({r, bound, out.max_abs / bound});
  }
  return out;
}

ProgressionBoundReport progression_bound_report(const ProgressionInterval& iv, const Modulus& modulus,
                                                int max_r) {
  require_coprime(iv.a, modulus, "progression_bound_report");
  const double q = static_cast<double>(modulus.value());
  ProgressionBoundReport out;
  out.max_abs = max_nonprincipal(progression_char_sums(modulus, iv));
  out.a_at_least_L = iv.a >= iv.L;
  out.a_at_most_L = iv.a <= iv.L;
  for (const int r : admissible_r(modulus, max_r)) {
    const double rr = r;
    const double bound = std::pow(q, (4.0 * rr * rr - 3.0 * rr + 1.0) / (4.0 * rr * rr)) *
                         std::pow(static_cast<double>(iv.a), -(rr - 1.0) / rr);
    out.shapes.push_back({r, bound, out.max_abs / bound});
  }
  return out;
}

}  // namespace lehmerlab
