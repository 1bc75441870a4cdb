#pragma once

// Exact determinants by fraction-free elimination and the characteristic
// polynomial oracle det(xI - A).

#include <hdnewton/oracle.hpp>
#include <hdnewton/scalar.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hdnewton {

/// Dense row-major matrix of rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    RationalMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("RationalMatrix: ragged rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Square rational matrix whose symmetry was checked exactly on construction.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(RationalMatrix m) : m_(std::move(m)) {
    if (!m_.is_square() || m_.rows() == 0) throw std::invalid_argument("SymmetricMatrix: need a non-empty square matrix");
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = i + 1; j < m_.cols(); ++j)
        if (m_(i, j) != m_(j, i))
          throw std::invalid_argument("SymmetricMatrix: entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") differs from its transpose");
  }

  std::size_t size() const { return m_.rows(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const RationalMatrix& matrix() const { return m_; }

  SymmetricMatrix operator-() const {
    RationalMatrix neg = m_;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) neg(i, j) = -m_(i, j);
    return SymmetricMatrix(std::move(neg));
  }

  /// A + c I.
  SymmetricMatrix shifted(const Rational& c) const {
    RationalMatrix out = m_;
    for (std::size_t i = 0; i < size(); ++i) out(i, i) += c;
    return SymmetricMatrix(std::move(out));
  }

  static SymmetricMatrix diagonal(const std::vector<Rational>& d) {
    RationalMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return SymmetricMatrix(std::move(m));
  }

  /// Adjacency matrix of the complete graph K_n (spectrum {n-1, -1 x (n-1)}).
  static SymmetricMatrix complete_graph(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = i == j ? 0 : 1;
    return SymmetricMatrix(std::move(m));
  }

 private:
  RationalMatrix m_;
};

/// Determinant of an integer matrix (row-major, n x n), destroying `a`.
/// Single-step Bareiss elimination: every division is exact.
inline Integer bareiss_det_integer(std::vector<Integer>& a, std::size_t n) {
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  auto at = [&](std::size_t i, std::size_t j) -> Integer& { return a[i * n + j]; };
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && at(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;  // zero column below the diagonal
      for (std::size_t j = k; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
      sign = -sign;
    }
    const Integer& pivot = at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = at(i, j) * pivot - at(i, k) * at(k, j);
        mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = pivot;
  }
  Integer d = at(n - 1, n - 1);
  return sign < 0 ? Integer(-d) : d;
}

/// Exact determinant of a square rational matrix: clear each column's
/// denominators, eliminate fraction-free, rescale.
inline Rational bareiss_det(const RationalMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("bareiss_det: matrix must be square");
  const std::size_t n = m.rows();
  std::vector<Integer> a(n * n);
  Integer scale = 1;
  for (std::size_t j = 0; j < n; ++j) {
    Integer l = 1;
    for (std::size_t i = 0; i < n; ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t i = 0; i < n; ++i) a[i * n + j] = m(i, j).get_num() * (l / m(i, j).get_den());
    scale *= l;
  }
  Rational d(bareiss_det_integer(a, n), scale);
  d.canonicalize();
  return d;
}

/// Oracle for the monic characteristic polynomial det(xI - A).
inline PolynomialOracle charpoly_oracle(const SymmetricMatrix& a) {
  return PolynomialOracle(a.size(), [a](const Rational& x) {
    RationalMatrix m(a.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = i == j ? x - a(i, j) : Rational(-a(i, j));
    return bareiss_det(m);
  });
}

inline Rational frobenius_norm_squared(const SymmetricMatrix& a) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) s += a(i, j) * a(i, j);
  return s;
}

/// s with ||A||_F <= s <= ||A||_F (1 + 2^-slack); 1 for the zero matrix.
inline Rational frobenius_upper_bound(const SymmetricMatrix& a, unsigned slack = kDefaultSlackBits) {
  Rational sq = frobenius_norm_squared(a);
  if (sgn(sq) == 0) return 1;
  return sqrt_upper_bound(sq, slack);
}

}  // namespace hdnewton
