#pragma once

// Affine reductions that move every root (or eigenvalue) into [0, 1/2].

#include <hdnewton/detpoly.hpp>
#include <hdnewton/oracle.hpp>
#include <hdnewton/scalar.hpp>

#include <stdexcept>
#include <utility>

namespace hdnewton {

/// Maps a root mu of the normalized problem back to scale * mu + shift.
/// Both normalizations use shift = -scale / 4.
struct AffineRootMap {
  Rational scale;
  Rational shift;
  std::size_t degree = 0;

  Rational to_original(const Rational& mu) const { return scale * mu + shift; }
  Rational to_normalized(const Rational& lambda) const { return (lambda - shift) / scale; }
};

inline AffineRootMap make_root_map(const Rational& scale, std::size_t degree) {
  if (sgn(scale) <= 0) throw std::invalid_argument("root map scale must be positive");
  return AffineRootMap{scale, -scale / 4, degree};
}

/// q(x) = p(4a(x - 1/4)) / (4a)^n. If every root of p lies in [-a, a],
/// every root of q lies in [0, 1/2]; root lambda maps to lambda/(4a) + 1/4.
inline std::pair<PolynomialOracle, AffineRootMap> normalize_poly(const PolynomialOracle& p, const Rational& root_bound) {
  if (sgn(root_bound) <= 0) throw std::invalid_argument("normalize_poly: root bound must be positive");
  AffineRootMap map = make_root_map(4 * root_bound, p.degree());
  const Rational monic = rpow(map.scale, p.degree());
  std::optional<Rational> top;
  if (p.largest_root()) top = map.to_normalized(*p.largest_root());
  PolynomialOracle q(
      p.degree(), [p, map, monic](const Rational& x) { return Rational(p(map.to_original(x)) / monic); }, top);
  return {std::move(q), map};
}

inline Rational denormalize_root(const Rational& mu, const AffineRootMap& map) { return map.to_original(mu); }

/// B = I/4 + A/(4s) for s >= ||A||_F; spectrum(B) lies in [0, 1/2] and
/// lambda_A = 4s (lambda_B - 1/4).
inline std::pair<SymmetricMatrix, AffineRootMap> normalize_matrix(const SymmetricMatrix& a, const Rational& s) {
  if (sgn(s) <= 0) throw std::invalid_argument("normalize_matrix: bound must be positive");
  const std::size_t n = a.size();
  RationalMatrix b(n, n);
  const Rational inv = 1 / (4 * s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = a(i, j) * inv + (i == j ? Rational(1, 4) : Rational(0));
  return {SymmetricMatrix(std::move(b)), make_root_map(4 * s, n)};
}

}  // namespace hdnewton
