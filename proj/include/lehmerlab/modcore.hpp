#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace lehmerlab {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimePower {
  u64 prime = 0;
  unsigned exponent = 0;

  u64 value() const;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// q = prod prime^exponent, primes strictly increasing.
struct Factorization {
  u64 q = 0;
  std::vector<PrimePower> factors;

  std::size_t omega() const { return factors.size(); }
  bool is_prime() const { return factors.size() == 1 && factors.front().exponent == 1; }
};

Factorization factorize(u64 q);
u64 euler_phi(u64 q);
int mobius(u64 d);
unsigned omega(u64 q);
bool is_prime(u64 n);

/// Squarefree divisors of q, i.e. the support of mu over the divisors of q.
std::vector<u64> squarefree_divisors(u64 q);

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);

/// Inverse of n modulo q for 1 <= n < q. Throws NotInvertibleError when gcd(n, q) > 1.
u64 mod_inverse(u64 n, u64 q);

/// Smallest primitive root modulo an odd prime power.
u64 primitive_root(const PrimePower& pp);

/// One cyclic factor of (Z/qZ)*. The generator is lifted through CRT so it is
/// 1 modulo every other prime-power component of q.
struct CyclicComponent {
  u64 generator = 1;
  u64 order = 1;
  u64 prime = 0;
  u64 prime_power = 1;
};

/// The modulus q together with the structure of its unit group and the dense
/// discrete-log and inverse tables. Cheap to copy; the tables are shared and
/// immutable, so one instance can be read from any number of threads.
class Modulus {
 public:
  static constexpr u64 kDefaultTableLimit = u64{1} << 24;
  static constexpr std::uint32_t kNotUnit = 0xffffffffu;

  explicit Modulus(u64 q, u64 table_limit = kDefaultTableLimit);

  u64 value() const;
  u64 phi() const;
  const Factorization& factorization() const;
  bool is_prime() const;

  /// Components ordered as: odd prime powers ascending, then the 2-power part.
  std::span<const CyclicComponent> components() const;
  std::size_t rank() const;

  /// Exponent of the unit group: lcm of the component orders.
  u64 exponent() const;

  bool is_unit(u64 n) const;
  /// Table lookup; n must already be reduced. Throws NotInvertibleError off U_q.
  u64 inverse(u64 n) const;
  /// 0 for non-units, otherwise the inverse.
  std::span<const std::uint32_t> inverse_table() const;

  /// Exponent tuple of the unit n (one entry per component); throws off U_q.
  std::span<const std::uint32_t> dlog(u64 n) const;
  /// Mixed-radix index of dlog(n) in [0, phi), last component fastest; kNotUnit off U_q.
  std::uint32_t flat_index(u64 n) const;
  /// Inverse of dlog: prod generator_j^exponents_j mod q.
  u64 unit_from_exponents(std::span<const std::uint32_t> exponents) const;

  /// exp(2 pi i k / exponent()).
  std::complex<double> root(u64 k) const;

  friend bool operator==(const Modulus& x, const Modulus& y) { return x.value() == y.value(); }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

/// Builds the unit group structure of q (alias of the Modulus constructor).
Modulus unit_group_structure(u64 q, u64 table_limit = Modulus::kDefaultTableLimit);

}  // namespace lehmerlab
