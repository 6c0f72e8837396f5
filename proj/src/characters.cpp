#include "lehmerlab/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "lehmerlab/cyclotomic.hpp"
#include "lehmerlab/errors.hpp"

namespace lehmerlab {

u64 reduce_mod(i64 n, u64 q) {
  const i64 r = n % static_cast<i64>(q);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
}

RootOfUnity RootOfUnity::make(u64 numerator, u64 order) {
  if (order == 0) throw DomainError("RootOfUnity: order must be >= 1");
  numerator %= order;
  const u64 g = std::gcd(numerator, order);
  if (numerator == 0) return one();
  return {numerator / g, order / g, false};
}

RootOfUnity RootOfUnity::conj() const {
  if (is_zero) return *this;
  return make(order - numerator, order);
}

std::complex<double> RootOfUnity::value() const {
  if (is_zero) return {0.0, 0.0};
  const long double angle = 2.0L * std::numbers::pi_v<long double> * numerator / order;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

RootOfUnity operator*(const RootOfUnity& x, const RootOfUnity& y) {
  if (x.is_zero || y.is_zero) return RootOfUnity::zero();
  const u64 order = std::lcm(x.order, y.order);
  return RootOfUnity::make(x.numerator * (order / x.order) + y.numerator * (order / y.order), order);
}

DirichletCharacter::DirichletCharacter(Modulus modulus, std::vector<std::uint32_t> exponents)
    : modulus_(std::move(modulus)), exponents_(std::move(exponents)) {
  const auto comps = modulus_.components();
  if (exponents_.size() != comps.size()) {
    throw DomainError("DirichletCharacter: expected " + std::to_string(comps.size()) +
                      " exponents, got " + std::to_string(exponents_.size()));
  }
  const u64 L = modulus_.exponent();
  weights_.resize(comps.size());
  for (std::size_t j = 0; j < comps.size(); ++j) {
    exponents_[j] = static_cast<std::uint32_t>(exponents_[j] % comps[j].order);
    weights_[j] = exponents_[j] * (L / comps[j].order) % L;
  }
}

DirichletCharacter DirichletCharacter::principal(const Modulus& modulus) {
  return DirichletCharacter(modulus, std::vector<std::uint32_t>(modulus.rank(), 0));
}

u64 DirichletCharacter::phase(u64 n) const {
  if (!modulus_.is_unit(n)) return kZeroPhase;
  const auto d = modulus_.dlog(n);
  const u64 L = modulus_.exponent();
  u64 k = 0;
  for (std::size_t j = 0; j < d.size(); ++j) k = (k + weights_[j] * d[j]) % L;
  return k;
}

RootOfUnity DirichletCharacter::operator()(i64 n) const {
  const u64 k = phase(reduce_mod(n, modulus_.value()));
  if (k == kZeroPhase) return RootOfUnity::zero();
  return RootOfUnity::make(k, modulus_.exponent());
}

std::complex<double> DirichletCharacter::value(u64 n) const {
  const u64 k = phase(n);
  if (k == kZeroPhase) return {0.0, 0.0};
  return modulus_.root(k);
}

DirichletCharacter DirichletCharacter::conjugate() const {
  const auto comps = modulus_.components();
  std::vector<std::uint32_t> neg(exponents_.size());
  for (std::size_t j = 0; j < neg.size(); ++j) {
    neg[j] = static_cast<std::uint32_t>((comps[j].order - exponents_[j]) % comps[j].order);
  }
  return DirichletCharacter(modulus_, std::move(neg));
}

bool DirichletCharacter::is_principal() const {
  return std::all_of(exponents_.begin(), exponents_.end(), [](std::uint32_t e) { return e == 0; });
}

bool DirichletCharacter::is_real() const { return order() <= 2; }

u64 DirichletCharacter::order() const {
  const auto comps = modulus_.components();
  u64 ord = 1;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    ord = std::lcm(ord, comps[j].order / std::gcd<u64, u64>(exponents_[j], comps[j].order));
  }
  return ord;
}

u64 DirichletCharacter::index() const {
  const auto comps = modulus_.components();
  u64 idx = 0;
  for (std::size_t j = 0; j < comps.size(); ++j) idx = idx * comps[j].order + exponents_[j];
  return idx;
}

DirichletCharacter CharacterGroup::operator[](u64 index) const {
  if (index >= size()) throw DomainError("CharacterGroup: index out of range");
  const auto comps = modulus_.components();
  std::vector<std::uint32_t> exps(comps.size());
  for (std::size_t j = comps.size(); j-- > 0;) {
    exps[j] = static_cast<std::uint32_t>(index % comps[j].order);
    index /= comps[j].order;
  }
  return DirichletCharacter(modulus_, std::move(exps));
}

CharacterGroup character_group(const Modulus& modulus) { return CharacterGroup(modulus); }

RootOfUnity evaluate(const DirichletCharacter& chi, i64 n) { return chi(n); }

namespace {

// Calls visit(k) with the phase of chi(u) for every chi, in canonical order.
template <class Visit>
void for_each_phase(u64 unit, const Modulus& m, Visit&& visit) {
  const auto comps = m.components();
  const auto d = m.dlog(unit);
  const u64 L = m.exponent();
  const std::size_t rank = comps.size();
  // step_j: phase increment when e_j goes up by one
  std::vector<u64> step(rank);
  for (std::size_t j = 0; j < rank; ++j) step[j] = d[j] * (L / comps[j].order) % L;
  std::vector<std::uint32_t> e(rank, 0);
  u64 phase = 0;
  for (u64 count = 0; count < m.phi(); ++count) {
    visit(phase);
    for (std::size_t j = rank; j-- > 0;) {
      if (++e[j] < comps[j].order) {
        phase = (phase + step[j]) % L;
        break;
      }
      // wrapped: e_j returns to 0, undo its full contribution
      e[j] = 0;
      phase = (phase + L - step[j] * (comps[j].order - 1) % L) % L;
    }
  }
}

}  // namespace

Rational orthogonality_sum(i64 u, const Modulus& modulus) {
  const u64 n = reduce_mod(u, modulus.value());
  if (!modulus.is_unit(n)) return Rational(0);
  CyclotomicSum sum(modulus.exponent());
  for_each_phase(n, modulus, [&](u64 k) { sum.add(k); });
  const auto total = sum.as_integer();
  if (!total) throw PrecisionError("orthogonality_sum: character sum is not a rational integer");
  return Rational(*total, static_cast<i64>(modulus.phi()));
}

std::complex<double> orthogonality_sum_floating(i64 u, const Modulus& modulus) {
  const u64 n = reduce_mod(u, modulus.value());
  if (!modulus.is_unit(n)) return {0.0, 0.0};
  std::complex<double> total{0.0, 0.0};
  for_each_phase(n, modulus, [&](u64 k) { total += modulus.root(k); });
  return total / static_cast<double>(modulus.phi());
}

}  // namespace lehmerlab
