#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace lehmerlab {

/// Integer coefficients of the n-th cyclotomic polynomial, constant term first.
std::vector<std::int64_t> cyclotomic_polynomial(std::uint64_t n);

/// Exact sums of n-th roots of unity with integer multiplicities, held as
/// elements of Z[x]/(Phi_n). A sum is a rational integer exactly when its
/// reduced form is a constant polynomial.
class CyclotomicSum {
 public:
  explicit CyclotomicSum(std::uint64_t n);

  std::uint64_t order() const { return n_; }

  /// Adds multiplicity * exp(2 pi i k / n).
  void add(std::uint64_t k, std::int64_t multiplicity = 1);

  /// Coefficients after reduction modulo Phi_n (length deg Phi_n).
  std::vector<std::int64_t> reduced() const;

  bool is_zero() const;
  /// The exact value when the sum is a rational integer.
  std::optional<std::int64_t> as_integer() const;

 private:
  std::uint64_t n_;
  std::vector<std::int64_t> counts_;
};

}  // namespace lehmerlab
