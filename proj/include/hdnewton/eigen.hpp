#pragma once

// Top eigenvalue of a symmetric rational matrix via its characteristic
// polynomial oracle, and the approximate-PSD test built on it.

#include <hdnewton/accel.hpp>
#include <hdnewton/detpoly.hpp>
#include <hdnewton/normalize.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace hdnewton {

struct EigResult {
  Rational lambda_max;
  std::uint64_t queries = 0;  ///< determinant evaluations
  IterationTrace trace;
  Rational frobenius_bound;
  Rational eps_scaled;
  std::size_t k = 0;
};

/// lambda1(A) <= lambda_max <= lambda1(A) + eps. Deterministic.
inline EigResult top_eigenvalue(const SymmetricMatrix& a, const Rational& eps, const AccelOptions& options = {}) {
  if (sgn(eps) <= 0) throw std::invalid_argument("top_eigenvalue: eps must be positive");
  EigResult out;
  out.frobenius_bound = frobenius_upper_bound(a);
  auto [b, map] = normalize_matrix(a, out.frobenius_bound);
  // An additive error e on the normalized spectrum is 4s e on the original.
  out.eps_scaled = std::min(Rational(1, 2), Rational(eps / (4 * out.frobenius_bound)));
  out.k = choose_k(a.size());
  AccelResult r = accel_root(charpoly_oracle(b), out.eps_scaled, out.k, options);
  out.lambda_max = denormalize_root(r.lambda, map);
  out.queries = r.trace.queries.count;
  out.trace = std::move(r.trace);
  return out;
}

struct PsdDecision {
  bool psd = false;
  /// Upper estimate of lambda_max(-A) at accuracy eps/2.
  EigResult negated;
};

/// Promise-problem answer with gap eps/2: true means A >= -eps I; false
/// means A is not >= -(eps/2) I. In between either answer may come back.
inline PsdDecision approx_psd_decision(const SymmetricMatrix& a, const Rational& eps) {
  if (sgn(eps) <= 0) throw std::invalid_argument("is_approx_psd: eps must be positive");
  PsdDecision d;
  d.negated = top_eigenvalue(-a, eps / 2);
  d.psd = d.negated.lambda_max <= eps;
  return d;
}

inline bool is_approx_psd(const SymmetricMatrix& a, const Rational& eps) { return approx_psd_decision(a, eps).psd; }

}  // namespace hdnewton
