#pragma once

#include "lehmerlab/lehmer.hpp"
#include "lehmerlab/rational.hpp"

namespace lehmerlab {

/// Two-term error shape
///   ||a||^norm_power q^first_exponent / prod(a)  +  q^second_exponent / prod(a)^product_power
/// with every o(1) set to zero. These are reported shapes, not proven bounds.
struct ErrorShape {
  Rational norm_power;
  Rational first_exponent;
  Rational second_exponent;
  Rational product_power;

  double first_term(double q, double a_norm, double a_product) const;
  double second_term(double q, double a_product) const;
  double evaluate(double q, double a_norm, double a_product) const;
};

/// Boxes, composite q, r in {1,2,3}, k >= 2:
/// second exponent k - (3r-1)(k-1)/4r^2, product power 1 - (k+r-1)/r(k+1).
ErrorShape box_error_shape(unsigned k, int r);
/// Joint regions Theta in T_{k+1} (k >= 2, r in {1,2,3}).
ErrorShape joint_region_error_shape(unsigned k, int r);
/// Marginal regions Omega in T_k (k >= 2, r in {1,2,3}).
ErrorShape marginal_region_error_shape(unsigned k, int r);

/// Prime moduli via the fourth moment, k >= 3, any r >= 1, as stated:
/// second exponent k - (3r-1)(k-3)/4r^2, product power 1 - (k+2r-3)/r(k+1).
ErrorShape prime_box_error_shape(unsigned k, int r);
/// The variant k - (3r-3)(k-1)/4r^2 that the final display of the argument produces.
ErrorShape prime_box_error_shape_variant(unsigned k, int r);
ErrorShape prime_joint_region_error_shape(unsigned k, int r);
ErrorShape prime_marginal_region_error_shape(unsigned k, int r);

/// Evaluated box shape for an instance.
double error_term_thm1(const LehmerInstance& inst, int r);
/// Evaluated prime box shape (stated exponent); prime q, k >= 3.
double error_term_thm4(const LehmerInstance& inst, int r);

/// Largest exponent e such that prod(a) <= q^(e - delta) keeps the box
/// estimate nontrivial: (k^2-1)/2k for k <= 4, 5/2 for k = 5, 2(k^2-1)/3(k+2) beyond.
Rational threshold_exponent(unsigned k);

}  // namespace lehmerlab
