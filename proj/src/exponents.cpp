#include "lehmerlab/exponents.hpp"

#include <cmath>
#include <string>

#include "lehmerlab/errors.hpp"

namespace lehmerlab {

namespace {

void require_composite_range(unsigned k, int r, const char* what) {
  if (k < 2) throw DomainError(std::string(what) + ": needs k >= 2");
  if (r < 1 || r > 3) throw DomainError(std::string(what) + ": r must be 1, 2 or 3 for general moduli");
}

void require_prime_range(unsigned k, int r, const char* what) {
  if (k < 3) throw DomainError(std::string(what) + ": needs k >= 3");
  if (r < 1) throw DomainError(std::string(what) + ": r must be >= 1");
}

Rational R(i64 n, i64 d = 1) { return Rational(n, d); }

}  // namespace

double ErrorShape::first_term(double q, double a_norm, double a_product) const {
  return std::pow(a_norm, to_double(norm_power)) * std::pow(q, to_double(first_exponent)) / a_product;
}

double ErrorShape::second_term(double q, double a_product) const {
  return std::pow(q, to_double(second_exponent)) / std::pow(a_product, to_double(product_power));
}

double ErrorShape::evaluate(double q, double a_norm, double a_product) const {
  return first_term(q, a_norm, a_product) + second_term(q, a_product);
}

ErrorShape box_error_shape(unsigned k, int r) {
  require_composite_range(k, r, "box_error_shape");
  const i64 K = k;
  return {R(1), R(K - 1), R(K) - R((3 * r - 1) * (K - 1), 4 * r * r), R(1) - R(K + r - 1, r * (K + 1))};
}

ErrorShape joint_region_error_shape(unsigned k, int r) {
  require_composite_range(k, r, "joint_region_error_shape");
  const i64 K = k;
  return {R(1, K + 1), R(K) - R(1, K + 1), R(K) - R((3 * r - 1) * (K - 1), 4 * r * r * (K + 1)),
          R(1) - R(K + r - 1, r * (K + 1) * (K + 1))};
}

ErrorShape marginal_region_error_shape(unsigned k, int r) {
  require_composite_range(k, r, "marginal_region_error_shape");
  const i64 K = k;
  return {R(1, K), R(K) - R(1, K), R(K) - R((3 * r - 1) * (K - 1), 4 * r * r * K),
          R(1) - R(K + r - 1, r * K * (K + 1))};
}

ErrorShape prime_box_error_shape(unsigned k, int r) {
  require_prime_range(k, r, "prime_box_error_shape");
  const i64 K = k;
  return {R(1), R(K - 1), R(K) - R((3 * r - 1) * (K - 3), 4 * r * r), R(1) - R(K + 2 * r - 3, r * (K + 1))};
}

ErrorShape prime_box_error_shape_variant(unsigned k, int r) {
  require_prime_range(k, r, "prime_box_error_shape_variant");
  const i64 K = k;
  return {R(1), R(K - 1), R(K) - R((3 * r - 3) * (K - 1), 4 * r * r), R(r * K - K - r + 3, r * (K + 1))};
}

ErrorShape prime_joint_region_error_shape(unsigned k, int r) {
  require_prime_range(k, r, "prime_joint_region_error_shape");
  const i64 K = k;
  return {R(1, K + 1), R(K) - R(1, K + 1), R(K) - R((3 * r - 1) * (K - 3), 4 * r * r * (K + 1)),
          R(1) - R(K + 2 * r - 3, r * (K + 1) * (K + 1))};
}

ErrorShape prime_marginal_region_error_shape(unsigned k, int r) {
  require_prime_range(k, r, "prime_marginal_region_error_shape");
  const i64 K = k;
  return {R(1, K), R(K) - R(1, K), R(K) - R((3 * r - 1) * (K - 3), 4 * r * r * K),
          R(1) - R(K + 2 * r - 3, r * K * (K + 1))};
}

double error_term_thm1(const LehmerInstance& inst, int r) {
  return box_error_shape(inst.k(), r)
      .evaluate(static_cast<double>(inst.q()), inst.a_norm(), static_cast<double>(inst.a_product()));
}

double error_term_thm4(const LehmerInstance& inst, int r) {
  if (!inst.modulus().is_prime()) throw DomainError("error_term_thm4: modulus must be prime");
  return prime_box_error_shape(inst.k(), r)
      .evaluate(static_cast<double>(inst.q()), inst.a_norm(), static_cast<double>(inst.a_product()));
}

Rational threshold_exponent(unsigned k) {
  if (k < 2) throw DomainError("threshold_exponent: needs k >= 2");
  const i64 K = k;
  if (K <= 4) return R(K * K - 1, 2 * K);
  if (K == 5) return R(5, 2);
  return R(2 * (K * K - 1), 3 * (K + 2));
}

}  // namespace lehmerlab
