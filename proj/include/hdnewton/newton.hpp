#pragma once

// Baseline: Newton iteration with a forward-difference derivative, using only
// oracle evaluations. Approaches the largest root from above.

#include <hdnewton/oracle.hpp>
#include <hdnewton/scalar.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hdnewton {

/// Thrown when p(x + delta) == p(x), which a monic real-rooted polynomial
/// cannot produce to the right of its largest root.
struct DegenerateOracle : std::domain_error {
  using std::domain_error::domain_error;
};

struct NewtonResult {
  Rational root_estimate;
  std::uint64_t iterations = 0;
  std::uint64_t queries = 0;
  /// x^0, x^1, ..., ending with root_estimate.
  std::vector<Rational> iterates;
};

/// Iteration cap ceil(2n ln(1/eps)) + ceil(log2(1/eps)), with ln(1/eps)
/// bounded above by the bit length of ceil(1/eps).
inline std::uint64_t classic_newton_cap(std::size_t n, const Rational& eps) {
  const Rational inv = 1 / eps;
  const auto ln_bound = static_cast<std::uint64_t>(bit_length(ceil_of(inv)));
  return 2 * n * ln_bound + static_cast<std::uint64_t>(ceil_log2(inv));
}

/// Largest root of p (roots in [0, 1/2]) to within eps, from x^0 = 1:
///   x <- x - (d/2) p(x) / (p(x + d) - p(x)),
/// d = min(eps^2, largest power of two <= eps/(8n)). The second term only
/// binds for eps > 1/(8n); there eps^2 alone lets the forward difference
/// overshoot p' by (1 + d/gap)^n and the early stop fires too soon.
/// Stops early once a step falls below eps/(4n). Steps are rounded down to
/// multiples of eps/(16 n^2) so the iterates stay short.
inline NewtonResult classic_newton(const PolynomialOracle& p, const Rational& eps) {
  if (sgn(eps) <= 0 || eps > Rational(1, 2)) throw std::invalid_argument("classic_newton: eps must lie in (0, 1/2]");
  const std::size_t n = p.degree();
  const Rational delta = std::min(Rational(eps * eps), pow2_floor(eps / (8 * n)));
  const Rational stop_below = eps / (4 * n);
  const Rational grid = eps / (16 * n * n);
  const std::uint64_t cap = classic_newton_cap(n, eps);

  NewtonResult result;
  Rational x = 1;
  result.iterates.push_back(x);
  for (std::uint64_t t = 0; t < cap; ++t) {
    const Rational px = p(x);
    const Rational pxd = p(x + delta);
    result.queries += 2;
    ++result.iterations;
    if (sgn(px) == 0) break;
    const Rational diff = pxd - px;
    if (sgn(diff) == 0) throw DegenerateOracle("classic_newton: flat forward difference at x = " + to_string(x));
    const Fraction step = Fraction(delta * px) / Fraction(2 * diff);
    if (compare(step, stop_below) < 0) break;
    const Integer cells = (step / Fraction(grid)).floor();
    x -= Rational(cells) * grid;
    result.iterates.push_back(x);
  }
  result.root_estimate = x;
  return result;
}

/// True iff each consecutive pair of iterates satisfies
/// x^{t+1} >= lambda1 and x^{t+1} - lambda1 <= (1 - 1/(4n)) (x^t - lambda1).
inline bool contraction_check(const std::vector<Rational>& iterates, const Rational& lambda1, std::size_t n) {
  const Rational factor = 1 - Rational(1, 4 * n);
  for (std::size_t t = 0; t + 1 < iterates.size(); ++t) {
    const Rational next_gap = iterates[t + 1] - lambda1;
    if (sgn(next_gap) < 0) return false;
    if (next_gap > factor * (iterates[t] - lambda1)) return false;
  }
  return true;
}

}  // namespace hdnewton
