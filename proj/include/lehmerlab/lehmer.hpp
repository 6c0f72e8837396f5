#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lehmerlab/discrepancy.hpp"
#include "lehmerlab/modcore.hpp"
#include "lehmerlab/region.hpp"

namespace lehmerlab {

/// The congruence system defining N(a, b, q): tuples (n_1..n_k) of units with
/// n_i = b_i (mod a_i) and inv(n_1...n_k) = b_{k+1} (mod a_{k+1}).
class LehmerInstance {
 public:
  LehmerInstance(Modulus modulus, unsigned k, std::vector<u64> a, std::vector<i64> b);

  unsigned k() const { return k_; }
  const Modulus& modulus() const { return modulus_; }
  u64 q() const { return modulus_.value(); }
  /// k+1 moduli, each a unit in [1, q).
  const std::vector<u64>& a() const { return a_; }
  /// k+1 residues, reduced into [0, a_i).
  const std::vector<u64>& b() const { return b_; }

  long double a_product() const;
  double a_norm() const;

 private:
  Modulus modulus_;
  unsigned k_;
  std::vector<u64> a_;
  std::vector<u64> b_;
};

struct EnumerationOptions {
  /// Maximum number of k-tuples visited.
  double budget = 4e9;
  /// Worker threads for counting; 0 selects the hardware concurrency.
  unsigned threads = 0;
};

/// Number of k-tuples the enumeration would visit inside the box (the full cube when null).
double enumeration_cost(const LehmerInstance& inst, const Box* box = nullptr);

/// #N(a, b, q) by direct enumeration.
u64 enumerate_N(const LehmerInstance& inst, const EnumerationOptions& options = {});

/// Streams every tuple of N(a, b, q) (restricted to the box when given) in
/// lexicographic order together with inv(n_1...n_k).
void for_each_tuple(const LehmerInstance& inst, const std::function<void(std::span<const u64>, u64)>& visit,
                    const EnumerationOptions& options = {}, const Box* box = nullptr);

/// #M_Sigma: tuples with n_i in [alpha_i q, beta_i q) and the inverse in
/// [alpha_{k+1} q, beta_{k+1} q).
u64 count_M_box(const LehmerInstance& inst, const Box& box, const EnumerationOptions& options = {});

/// #M_Sigma through (1/phi(q)) sum_chi prod_nu S_nu(chi), rounded to the
/// nearest integer. Throws PrecisionError if the sum lands more than 0.1
/// away from an integer.
u64 count_M_box_charsum(const LehmerInstance& inst, const Box& box);

/// lambda phi(q)^k / (a_1 ... a_{k+1})
double main_term(const LehmerInstance& inst, double measure);

/// M_Theta (joint, dimension k+1) or N_Omega (marginal, dimension k).
u64 count_region(const LehmerInstance& inst, const RegionSpec& region, bool joint,
                 const EnumerationOptions& options = {});

/// A(a,b,q): (n_1/q, ..., n_k/q, inv(n_1...n_k)/q).
PointSet point_set_A(const LehmerInstance& inst, const EnumerationOptions& options = {});
/// B(a,b,q): (n_1/q, ..., n_k/q).
PointSet point_set_B(const LehmerInstance& inst, const EnumerationOptions& options = {});

/// max over N(a,b,q) of min_i |n_i - inv(n_1...n_k)|. Throws DomainError on an empty set.
u64 h_statistic(const LehmerInstance& inst, const EnumerationOptions& options = {});

/// H(q) = max over units of |n - inv(n)|.
u64 inverse_spread(const Modulus& modulus);

}  // namespace lehmerlab
