#include "lehmerlab/cyclotomic.hpp"

#include <algorithm>

#include "lehmerlab/errors.hpp"
#include "lehmerlab/modcore.hpp"

namespace lehmerlab {

namespace {

using Poly = std::vector<std::int64_t>;

// p(x) -> p(x^m)
Poly inflate(const Poly& p, std::uint64_t m) {
  Poly out((p.size() - 1) * m + 1, 0);
  for (std::size_t i = 0; i < p.size(); ++i) out[i * m] = p[i];
  return out;
}

// exact quotient of p by the monic divisor d
Poly divide_exact(Poly p, const Poly& d) {
  const std::size_t dd = d.size() - 1;
  Poly quotient(p.size() - dd, 0);
  for (std::size_t i = p.size(); i-- > dd;) {
    const std::int64_t c = p[i];
    if (c == 0) continue;
    quotient[i - dd] = c;
    for (std::size_t j = 0; j <= dd; ++j) p[i - dd + j] -= c * d[j];
  }
  if (std::any_of(p.begin(), p.end(), [](std::int64_t c) { return c != 0; })) {
    throw PrecisionError("cyclotomic division left a remainder");
  }
  return quotient;
}

}  // namespace

std::vector<std::int64_t> cyclotomic_polynomial(std::uint64_t n) {
  if (n == 0) throw DomainError("cyclotomic_polynomial: n must be >= 1");
  if (n == 1) return {-1, 1};
  // Phi_n(x) = Phi_rad(n)(x^(n / rad(n))), and for squarefree m with p not dividing m,
  // Phi_{mp}(x) = Phi_m(x^p) / Phi_m(x).
  Poly phi{-1, 1};
  std::uint64_t rad = 1;
  for (const auto& pp : factorize(n).factors) {
    phi = divide_exact(inflate(phi, pp.prime), phi);
    rad *= pp.prime;
  }
  return inflate(phi, n / rad);
}

CyclotomicSum::CyclotomicSum(std::uint64_t n) : n_(n), counts_(n, 0) {
  if (n == 0) throw DomainError("CyclotomicSum: order must be >= 1");
}

void CyclotomicSum::add(std::uint64_t k, std::int64_t multiplicity) { counts_[k % n_] += multiplicity; }

std::vector<std::int64_t> CyclotomicSum::reduced() const {
  const Poly phi = cyclotomic_polynomial(n_);
  const std::size_t deg = phi.size() - 1;
  // sparse view of Phi_n; most of its coefficients vanish
  std::vector<std::pair<std::size_t, std::int64_t>> terms;
  for (std::size_t j = 0; j < deg; ++j) {
    if (phi[j] != 0) terms.emplace_back(j, phi[j]);
  }
  Poly r = counts_;
  for (std::size_t i = r.size(); i-- > deg;) {
    const std::int64_t c = r[i];
    if (c == 0) continue;
    r[i] = 0;
    for (const auto& [j, coeff] : terms) r[i - deg + j] -= c * coeff;
  }
  r.resize(deg);
  return r;
}

bool CyclotomicSum::is_zero() const {
  const auto r = reduced();
  return std::all_of(r.begin(), r.end(), [](std::int64_t c) { return c == 0; });
}

std::optional<std::int64_t> CyclotomicSum::as_integer() const {
  const auto r = reduced();
  if (std::any_of(r.begin() + 1, r.end(), [](std::int64_t c) { return c != 0; })) return std::nullopt;
  return r.empty() ? 0 : r.front();
}

}  // namespace lehmerlab
