#include "lehmerlab/modcore.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "lehmerlab/errors.hpp"

namespace lehmerlab {

namespace {

constexpr u64 kMaxFactorizable = u64{1} << 63;

using u128 = unsigned __int128;

}  // namespace

u64 PrimePower::value() const {
  u64 v = 1;
  for (unsigned i = 0; i < exponent; ++i) v *= prime;
  return v;
}

Factorization factorize(u64 q) {
  if (q < 2) throw DomainError("factorize: q must be >= 2, got " + std::to_string(q));
  if (q >= kMaxFactorizable) throw DomainError("factorize: q must be < 2^63");
  Factorization f{q, {}};
  u64 n = q;
  auto strip = [&](u64 p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) f.factors.push_back({p, e});
  };
  strip(2);
  strip(3);
  // 6k +- 1 wheel
  for (u64 p = 5; p <= n / p; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

u64 euler_phi(u64 q) {
  if (q == 0) throw DomainError("euler_phi: q must be >= 1");
  if (q == 1) return 1;
  u64 phi = 1;
  for (const auto& pp : factorize(q).factors) phi *= pp.value() / pp.prime * (pp.prime - 1);
  return phi;
}

int mobius(u64 d) {
  if (d == 0) throw DomainError("mobius: argument must be >= 1");
  if (d == 1) return 1;
  int mu = 1;
  for (const auto& pp : factorize(d).factors) {
    if (pp.exponent > 1) return 0;
    mu = -mu;
  }
  return mu;
}

unsigned omega(u64 q) {
  if (q == 0) throw DomainError("omega: argument must be >= 1");
  if (q == 1) return 0;
  return static_cast<unsigned>(factorize(q).omega());
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  return factorize(n).is_prime();
}

std::vector<u64> squarefree_divisors(u64 q) {
  std::vector<u64> divs{1};
  if (q == 1) return divs;
  for (const auto& pp : factorize(q).factors) {
    const std::size_t n = divs.size();
    for (std::size_t i = 0; i < n; ++i) divs.push_back(divs[i] * pp.prime);
  }
  return divs;
}

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 mod_inverse(u64 n, u64 q) {
  if (q < 2) throw DomainError("mod_inverse: modulus must be >= 2");
  if (n == 0 || n >= q) throw DomainError("mod_inverse: need 1 <= n < q");
  // extended Euclid on signed 128-bit to stay clear of overflow near 2^63
  __int128 r0 = q, r1 = n, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const __int128 t = r0 / r1;
    r0 -= t * r1;
    std::swap(r0, r1);
    s0 -= t * s1;
    std::swap(s0, s1);
  }
  if (r0 != 1) {
    throw NotInvertibleError("mod_inverse: gcd(" + std::to_string(n) + ", " + std::to_string(q) +
                             ") > 1");
  }
  if (s0 < 0) s0 += q;
  return static_cast<u64>(s0);
}

u64 primitive_root(const PrimePower& pp) {
  if (pp.prime == 2) throw DomainError("primitive_root: only odd prime powers are cyclic here");
  const u64 m = pp.value();
  const u64 order = m / pp.prime * (pp.prime - 1);
  const auto order_factors = factorize(order).factors;
  for (u64 g = 2; g < m; ++g) {
    if (g % pp.prime == 0) continue;
    bool primitive = true;
    for (const auto& f : order_factors) {
      if (pow_mod(g, order / f.prime, m) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
  throw DomainError("primitive_root: none found for " + std::to_string(m));
}

struct Modulus::Data {
  u64 q = 0;
  u64 phi = 1;
  u64 exponent = 1;
  Factorization factorization;
  std::vector<CyclicComponent> components;
  std::vector<u64> radix_weights;           // mixed-radix place values
  std::vector<std::uint32_t> dlog;          // q * rank, row-major
  std::vector<std::uint32_t> inverse;       // 0 off U_q
  std::vector<std::complex<double>> roots;  // exponent-th roots of unity
};

namespace {

// x = target mod m_part and 1 mod q/m_part
u64 crt_lift(u64 target, u64 m_part, u64 q) {
  const u64 rest = q / m_part;
  if (rest == 1) return target % q;
  // x = 1 + rest * t, need rest * t = target - 1 (mod m_part)
  const u64 rest_inv = mod_inverse(rest % m_part, m_part);
  const u64 t = mul_mod((target + m_part - 1) % m_part, rest_inv, m_part);
  return (1 + mul_mod(rest, t, q)) % q;
}

}  // namespace

Modulus::Modulus(u64 q, u64 table_limit) {
  if (q < 2) throw DomainError("Modulus: q must be >= 2, got " + std::to_string(q));
  if (q > table_limit) {
    throw CapacityError("Modulus: q = " + std::to_string(q) + " exceeds table limit " +
                        std::to_string(table_limit));
  }
  if (q > 0xffffffffull) throw CapacityError("Modulus: q must fit in 32 bits for dense tables");

  auto d = std::make_shared<Data>();
  d->q = q;
  d->factorization = factorize(q);

  // Local discrete-log tables per prime-power part. Each entry holds the
  // exponents of that part's components (one for odd p, up to two for 2^e).
  struct Local {
    u64 modulus;
    std::size_t first_component;
    std::size_t count;
    std::vector<std::uint32_t> table;  // modulus * count, kNotUnit for non-units
  };
  std::vector<Local> locals;

  const PrimePower* two_part = nullptr;
  for (const auto& pp : d->factorization.factors) {
    if (pp.prime == 2) {
      two_part = &pp;
      continue;
    }
    const u64 m = pp.value();
    const u64 order = m / pp.prime * (pp.prime - 1);
    const u64 g = primitive_root(pp);
    Local local{m, d->components.size(), 1, std::vector<std::uint32_t>(m, kNotUnit)};
    u64 x = 1;
    for (u64 t = 0; t < order; ++t) {
      local.table[x] = static_cast<std::uint32_t>(t);
      x = x * g % m;
    }
    d->components.push_back({crt_lift(g, m, q), order, pp.prime, m});
    locals.push_back(std::move(local));
  }
  if (two_part != nullptr && two_part->exponent >= 2) {
    const u64 m = two_part->value();
    const u64 minus_one = crt_lift(m - 1, m, q);
    if (two_part->exponent == 2) {
      Local local{m, d->components.size(), 1, std::vector<std::uint32_t>(m, kNotUnit)};
      local.table[1] = 0;
      local.table[3] = 1;
      d->components.push_back({minus_one, 2, 2, m});
      locals.push_back(std::move(local));
    } else {
      // (Z/2^e)* = <-1> x <5>
      const u64 half_order = m / 4;
      Local local{m, d->components.size(), 2, std::vector<std::uint32_t>(2 * m, kNotUnit)};
      for (u64 s = 0; s < 2; ++s) {
        u64 x = (s == 0) ? 1 : m - 1;
        for (u64 t = 0; t < half_order; ++t) {
          local.table[2 * x] = static_cast<std::uint32_t>(s);
          local.table[2 * x + 1] = static_cast<std::uint32_t>(t);
          x = x * 5 % m;
        }
      }
      d->components.push_back({minus_one, 2, 2, m});
      d->components.push_back({crt_lift(5, m, q), half_order, 2, m});
      locals.push_back(std::move(local));
    }
  }

  const std::size_t rank = d->components.size();
  d->phi = 1;
  d->exponent = 1;
  for (const auto& c : d->components) {
    d->phi *= c.order;
    d->exponent = std::lcm(d->exponent, c.order);
  }
  d->radix_weights.assign(rank, 1);
  for (std::size_t j = rank; j-- > 1;) {
    d->radix_weights[j - 1] = d->radix_weights[j] * d->components[j].order;
  }

  d->dlog.assign(q * rank, 0);
  d->inverse.assign(q, 0);
  std::vector<std::uint32_t> exps(rank);
  for (u64 n = 1; n < q; ++n) {
    bool unit = true;
    // the odd parts and the 2-part all need n coprime to their prime
    for (const auto& pp : d->factorization.factors) {
      if (n % pp.prime == 0) {
        unit = false;
        break;
      }
    }
    if (!unit) continue;
    for (const auto& local : locals) {
      const u64 r = n % local.modulus;
      for (std::size_t c = 0; c < local.count; ++c) {
        d->dlog[n * rank + local.first_component + c] = local.table[r * local.count + c];
      }
    }
    d->inverse[n] = static_cast<std::uint32_t>(mod_inverse(n, q));
  }

  d->roots.resize(d->exponent);
  for (u64 k = 0; k < d->exponent; ++k) {
    const long double angle =
        2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k) / d->exponent;
    d->roots[k] = {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }
  data_ = std::move(d);
}

u64 Modulus::value() const { return data_->q; }
u64 Modulus::phi() const { return data_->phi; }
const Factorization& Modulus::factorization() const { return data_->factorization; }
bool Modulus::is_prime() const { return data_->factorization.is_prime(); }
std::span<const CyclicComponent> Modulus::components() const { return data_->components; }
std::size_t Modulus::rank() const { return data_->components.size(); }
u64 Modulus::exponent() const { return data_->exponent; }

bool Modulus::is_unit(u64 n) const { return n < data_->q && data_->inverse[n] != 0; }

u64 Modulus::inverse(u64 n) const {
  if (!is_unit(n)) {
    throw NotInvertibleError("Modulus::inverse: " + std::to_string(n) + " is not a unit mod " +
                             std::to_string(data_->q));
  }
  return data_->inverse[n];
}

std::span<const std::uint32_t> Modulus::inverse_table() const { return data_->inverse; }

std::span<const std::uint32_t> Modulus::dlog(u64 n) const {
  if (!is_unit(n)) {
    throw NotInvertibleError("Modulus::dlog: " + std::to_string(n) + " is not a unit mod " +
                             std::to_string(data_->q));
  }
  const std::size_t rank = data_->components.size();
  return std::span<const std::uint32_t>(data_->dlog).subspan(n * rank, rank);
}

std::uint32_t Modulus::flat_index(u64 n) const {
  if (!is_unit(n)) return kNotUnit;
  const std::size_t rank = data_->components.size();
  u64 index = 0;
  for (std::size_t j = 0; j < rank; ++j) index += data_->dlog[n * rank + j] * data_->radix_weights[j];
  return static_cast<std::uint32_t>(index);
}

u64 Modulus::unit_from_exponents(std::span<const std::uint32_t> exponents) const {
  if (exponents.size() != rank()) throw DomainError("unit_from_exponents: wrong tuple length");
  u64 x = 1 % data_->q;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    x = mul_mod(x, pow_mod(data_->components[j].generator, exponents[j], data_->q), data_->q);
  }
  return x;
}

std::complex<double> Modulus::root(u64 k) const { return data_->roots[k % data_->exponent]; }

Modulus unit_group_structure(u64 q, u64 table_limit) { return Modulus(q, table_limit); }

}  // namespace lehmerlab
