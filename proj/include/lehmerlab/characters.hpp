#pragma once

#include <complex>
#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

#include "lehmerlab/modcore.hpp"
#include "lehmerlab/rational.hpp"

namespace lehmerlab {

/// exp(2 pi i numerator / order) in lowest terms, or the value 0.
struct RootOfUnity {
  u64 numerator = 0;
  u64 order = 1;
  bool is_zero = false;

  static RootOfUnity zero() { return {0, 1, true}; }
  static RootOfUnity one() { return {0, 1, false}; }
  /// Reduces numerator/order to lowest terms.
  static RootOfUnity make(u64 numerator, u64 order);

  bool is_one() const { return !is_zero && numerator == 0; }
  RootOfUnity conj() const;
  std::complex<double> value() const;

  friend RootOfUnity operator*(const RootOfUnity& x, const RootOfUnity& y);
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
  friend auto operator<=>(const RootOfUnity&, const RootOfUnity&) = default;
};

/// A Dirichlet character modulo q, stored as exponents on the cyclic
/// components of the unit group: chi(g_j) = exp(2 pi i e_j / ord_j).
class DirichletCharacter {
 public:
  static constexpr u64 kZeroPhase = ~u64{0};

  DirichletCharacter(Modulus modulus, std::vector<std::uint32_t> exponents);

  static DirichletCharacter principal(const Modulus& modulus);

  const Modulus& modulus() const { return modulus_; }
  std::span<const std::uint32_t> exponents() const { return exponents_; }

  /// chi(n) with n reduced modulo q first; exact.
  RootOfUnity operator()(i64 n) const;

  /// k such that chi(n) = exp(2 pi i k / exponent()) for reduced units n,
  /// kZeroPhase for non-units.
  u64 phase(u64 n) const;
  std::complex<double> value(u64 n) const;

  DirichletCharacter conjugate() const;
  bool is_principal() const;
  /// Real-valued: every exponent has order dividing 2 in its component.
  bool is_real() const;
  /// Order of chi as an element of the character group.
  u64 order() const;
  /// Position in the canonical lexicographic enumeration.
  u64 index() const;

  friend bool operator==(const DirichletCharacter& x, const DirichletCharacter& y) {
    return x.modulus_ == y.modulus_ && x.exponents_ == y.exponents_;
  }

 private:
  Modulus modulus_;
  std::vector<std::uint32_t> exponents_;
  std::vector<u64> weights_;  // e_j * exponent / ord_j mod exponent
};

/// All phi(q) characters, principal first, lexicographic in the exponent tuple.
class CharacterGroup {
 public:
  explicit CharacterGroup(Modulus modulus) : modulus_(std::move(modulus)) {}

  const Modulus& modulus() const { return modulus_; }
  u64 size() const { return modulus_.phi(); }
  DirichletCharacter operator[](u64 index) const;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = DirichletCharacter;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = DirichletCharacter;

    iterator() = default;
    iterator(const CharacterGroup* group, u64 index) : group_(group), index_(index) {}
    DirichletCharacter operator*() const { return (*group_)[index_]; }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto old = *this;
      ++index_;
      return old;
    }
    friend bool operator==(const iterator& x, const iterator& y) { return x.index_ == y.index_; }

   private:
    const CharacterGroup* group_ = nullptr;
    u64 index_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size()}; }

 private:
  Modulus modulus_;
};

CharacterGroup character_group(const Modulus& modulus);

RootOfUnity evaluate(const DirichletCharacter& chi, i64 n);

/// (1/phi(q)) sum_chi chi(u), evaluated exactly in Z[zeta] from the grouped
/// root-of-unity values.
Rational orthogonality_sum(i64 u, const Modulus& modulus);

/// The same sum accumulated in complex double precision.
std::complex<double> orthogonality_sum_floating(i64 u, const Modulus& modulus);

/// Reduces any integer into [0, q).
u64 reduce_mod(i64 n, u64 q);

}  // namespace lehmerlab
