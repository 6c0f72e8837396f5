#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "lehmerlab/characters.hpp"
#include "lehmerlab/modcore.hpp"
#include "lehmerlab/rational.hpp"

namespace lehmerlab {

/// The range {n : K+1 <= n <= K+L, n = b (mod a)}.
struct ProgressionInterval {
  i64 K = 0;
  i64 L = 1;
  i64 a = 1;
  i64 b = 0;

  /// floor((K+L-b)/a) - floor((K-b)/a)
  i64 term_count() const;
  /// Smallest n >= K+1 with n = b (mod a).
  i64 first_term() const;
  i64 last() const { return K + L; }

  /// Throws DomainError unless L >= 1 and a >= 1.
  void validate() const;
  /// The stricter preconditions of the moment bounds: 0 <= K < K+L <= q and gcd(a, q) = 1.
  void validate_for_moments(u64 q) const;
};

/// Sums of at least this many terms use compensated accumulation.
inline constexpr i64 kCompensatedThreshold = 10'000'000;

std::complex<double> progression_char_sum(const DirichletCharacter& chi, const ProgressionInterval& iv);

/// progression_char_sum for every character of the group, in canonical order.
std::vector<std::complex<double>> progression_char_sums(const Modulus& modulus,
                                                        const ProgressionInterval& iv);

/// Both sides of the change of variable n = a m + b:
/// sum chi(n) and chi(a) * sum_m chi(m + b * inv(a)).
struct ShiftIdentity {
  std::complex<double> direct;
  std::complex<double> shifted;
  i64 terms = 0;
  bool holds = false;
};

ShiftIdentity shift_identity(const DirichletCharacter& chi, const ProgressionInterval& iv);
bool shift_identity_check(const DirichletCharacter& chi, const ProgressionInterval& iv);

/// sum over all chi of |progression sum|^2.
double second_moment(const ProgressionInterval& iv, const Modulus& modulus);
/// phi(q) (L/a + 1)
double second_moment_bound(const ProgressionInterval& iv, const Modulus& modulus);

struct FourthMoment {
  double value = 0.0;
  /// value / (p (L/a + 1)^2 (log p)^2); the implied constant is unknown so this is reported only.
  double bound_ratio = 0.0;
};

/// Fourth moment over nonprincipal characters; prime moduli only.
FourthMoment fourth_moment_nonprincipal(const ProgressionInterval& iv, const Modulus& prime_modulus);

struct PrincipalCount {
  i64 exact = 0;
  Rational main;       // phi(q) L / (a q)
  i64 error_bound = 0; // 2^omega(q)
};

/// The principal-character progression sum, counted through Moebius inversion
/// over the squarefree divisors of q.
PrincipalCount principal_progression_count(const ProgressionInterval& iv, const Modulus& modulus);

struct BurgessRatio {
  int r = 1;
  double bound = 0.0;  // V^{1-1/r} q^{(r+1)/4r^2}
  double ratio = 0.0;
};

struct NonprincipalMax {
  double max_abs = 0.0;
  /// max_abs / (sqrt(q) log q)
  double pv_ratio = 0.0;
  /// r = 1, 2, 3 always; r >= 4 only for prime moduli.
  std::vector<BurgessRatio> burgess;
};

/// max over chi != chi0 of |sum_{n=U+1}^{U+V} chi(n)|.
NonprincipalMax max_nonprincipal_sum(i64 U, i64 V, const Modulus& modulus, int max_r = 3);

struct ProgressionBoundReport {
  double max_abs = 0.0;
  /// Shape q^{(4r^2-3r+1)/4r^2} a^{-(r-1)/r}, one entry per r.
  std::vector<BurgessRatio> shapes;
  /// The two readings of the hypothesis relating a and L; reported, never enforced.
  bool a_at_least_L = false;
  bool a_at_most_L = false;
};

ProgressionBoundReport progression_bound_report(const ProgressionInterval& iv, const Modulus& modulus,
                                                int max_r = 3);

}  // namespace lehmerlab
