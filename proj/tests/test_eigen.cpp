#include <hdnewton/eigen.hpp>

#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace hdnewton;

namespace {

void expect_within(const Rational& got, const Rational& truth, const Rational& eps) {
  EXPECT_GE(got, truth) << to_string(got);
  EXPECT_LE(got - truth, eps) << to_string(got);
}

}  // namespace

TEST(TopEigenvalue, Diagonal) {
  const Rational eps(1, 100);
  const auto r = top_eigenvalue(SymmetricMatrix::diagonal({Rational(3), Rational(1), Rational(-2)}), eps);
  expect_within(r.lambda_max, 3, eps);
  EXPECT_EQ(r.k, 2u);
  EXPECT_EQ(r.queries, r.trace.queries.count);
  EXPECT_EQ(r.eps_scaled, std::min(Rational(1, 2), Rational(eps / (4 * r.frobenius_bound))));
}

TEST(TopEigenvalue, CompleteGraph) {
  const Rational eps(1, 100);
  expect_within(top_eigenvalue(SymmetricMatrix::complete_graph(4), eps).lambda_max, 3, eps);
}

TEST(TopEigenvalue, ZeroMatrix) {
  const Rational eps(1, 8);
  expect_within(top_eigenvalue(SymmetricMatrix(RationalMatrix(3, 3)), eps).lambda_max, 0, eps);
}

TEST(TopEigenvalue, HugeEpsIsClamped) {
  const auto r = top_eigenvalue(SymmetricMatrix::diagonal({Rational(1, 3)}), Rational(1000));
  EXPECT_EQ(r.eps_scaled, Rational(1, 2));
  expect_within(r.lambda_max, Rational(1, 3), Rational(1000));
}

TEST(TopEigenvalue, RejectsEps) {
  EXPECT_THROW(top_eigenvalue(SymmetricMatrix::complete_graph(2), Rational(0)), std::invalid_argument);
}

TEST(TopEigenvalue, BlockDiagonalKnownSpectrum) {
  // blocks [[a, b], [b, a]] have eigenvalues a +- b
  ref::Gen g(71);
  for (int i = 0; i < 6; ++i) {
    const std::size_t blocks = static_cast<std::size_t>(g.in_range(1, 3));
    RationalMatrix m(2 * blocks, 2 * blocks);
    Rational top = -1000;
    for (std::size_t b = 0; b < blocks; ++b) {
      const Rational a = g.signed_rational(9, 4), off = g.signed_rational(9, 4);
      m(2 * b, 2 * b) = m(2 * b + 1, 2 * b + 1) = a;
      m(2 * b, 2 * b + 1) = m(2 * b + 1, 2 * b) = off;
      top = std::max(top, Rational(a + abs(off)));
    }
    const Rational eps(1, 64);
    const auto r = top_eigenvalue(SymmetricMatrix(m), eps);
    expect_within(r.lambda_max, top, eps);
    const std::size_t k = choose_k(2 * blocks);
    const auto c = make_config(2 * blocks, r.eps_scaled, k);
    EXPECT_LE(r.queries, 2 * (k + 1) * c.max_iters);
  }
}

TEST(TopEigenvalue, ShiftEquivariance) {
  const SymmetricMatrix a = SymmetricMatrix::complete_graph(3);
  const Rational eps(1, 50), c(5, 3);
  const Rational base = top_eigenvalue(a, eps).lambda_max;
  const Rational shifted = top_eigenvalue(a.shifted(c), eps).lambda_max;
  EXPECT_LE(abs(shifted - base - c), eps);
}

TEST(IsApproxPsd, SpecCases) {
  const Rational eps(1, 10);
  const auto id = SymmetricMatrix::diagonal({Rational(1), Rational(1), Rational(1)});
  EXPECT_TRUE(is_approx_psd(id, eps));
  EXPECT_FALSE(is_approx_psd(SymmetricMatrix::diagonal({Rational(-1), Rational(-1)}), eps));
  EXPECT_TRUE(is_approx_psd(SymmetricMatrix::diagonal({-eps / 4, -eps / 4}), eps));
  EXPECT_TRUE(is_approx_psd(SymmetricMatrix(RationalMatrix(2, 2)), eps));
  EXPECT_THROW(is_approx_psd(id, Rational(0)), std::invalid_argument);
}

TEST(IsApproxPsd, OutsideTheGap) {
  const Rational eps(1, 10);
  // lambda_max(-A) = 0.04 < eps/2 ... must be true; 0.2 > eps must be false.
  EXPECT_TRUE(is_approx_psd(SymmetricMatrix::diagonal({Rational(-1, 25), Rational(2)}), eps));
  EXPECT_FALSE(is_approx_psd(SymmetricMatrix::diagonal({Rational(-1, 5), Rational(2)}), eps));
  const auto d = approx_psd_decision(SymmetricMatrix::diagonal({Rational(-1, 5), Rational(2)}), eps);
  EXPECT_GE(d.negated.lambda_max, Rational(1, 5));
}
