#include <gtest/gtest.h>

#include "test_support.hpp"

namespace flathom {
namespace {

using testing::a4;
using testing::vec;

TEST(Scalar, ParsesIntegersAndFractions) {
  EXPECT_EQ(parse_scalar("3"), Scalar(3));
  EXPECT_EQ(parse_scalar("-4/6"), Scalar(-2, 3));
  EXPECT_EQ(parse_scalar("+5/10"), Scalar(1, 2));
  EXPECT_EQ(to_string(parse_scalar("0/7")), "0");
}

TEST(Scalar, RejectsNonRationals) {
  for (const char* bad : {"", "1.5", "1e3", "1/0", "a", "1/", "/2", "3/-4", "--1"}) {
    EXPECT_THROW(parse_scalar(bad), ParseError) << bad;
  }
}

TEST(Scalar, CanonicalFormInvariant) {
  const Scalar q = parse_scalar("-12/18");
  EXPECT_EQ(q.get_num(), -2);
  EXPECT_EQ(q.get_den(), 3);
  EXPECT_EQ(to_string(q), "-2/3");
}

TEST(RrefBasis, ScalingAndZeroRows) {
  const std::vector<Vector> in{vec({2, 0}), vec({0, 0})};
  const Subspace s = rref_basis(in, 2);
  ASSERT_EQ(s.dim(), 1u);
  EXPECT_EQ(s.basis()[0], vec({1, 0}));
}

TEST(RrefBasis, SpanningPair) {
  const std::vector<Vector> in{vec({1, 1}), vec({1, -1})};
  EXPECT_EQ(rref_basis(in, 2), Subspace::full(2));
}

TEST(RrefBasis, RowReducedByHand) {
  const std::vector<Vector> in{vec({0, 1, 1, 0}), vec({0, 2, 2, 0}), vec({1, 0, 0, 0})};
  const Subspace s = rref_basis(in, 4);
  ASSERT_EQ(s.dim(), 2u);
  EXPECT_EQ(s.basis()[0], vec({1, 0, 0, 0}));
  EXPECT_EQ(s.basis()[1], vec({0, 1, 1, 0}));
}

TEST(RrefBasis, DimensionMismatchThrows) {
  const std::vector<Vector> in{vec({1, 0}), vec({1, 0, 0})};
  EXPECT_THROW(rref_basis(in, 2), DimensionError);
}

TEST(Kernel, Examples) {
  EXPECT_EQ(kernel(Matrix::from_rows({{1, 0}, {0, 0}})), rref_basis(std::vector<Vector>{vec({0, 1})}, 2));
  EXPECT_EQ(kernel(Matrix::zero(2, 2)), Subspace::full(2));
  // A4 x = 0 means x2 = x3 and x4 = 0.
  const Subspace k = kernel(a4());
  ASSERT_EQ(k.dim(), 2u);
  EXPECT_EQ(k.basis()[0], vec({1, 0, 0, 0}));
  EXPECT_EQ(k.basis()[1], vec({0, 1, 1, 0}));
}

TEST(Image, Examples) {
  EXPECT_EQ(image(Matrix::identity(3)), Subspace::full(3));
  EXPECT_TRUE(image(Matrix::zero(2, 2)).is_zero());
  // Columns of A4 are 0, -e1, e1, e2+e3.
  const Subspace im = image(a4());
  ASSERT_EQ(im.dim(), 2u);
  EXPECT_EQ(im.basis()[0], vec({1, 0, 0, 0}));
  EXPECT_EQ(im.basis()[1], vec({0, 1, 1, 0}));
  EXPECT_EQ(im, kernel(a4()));
}

TEST(SumIntersect, Examples) {
  const Subspace e12 = rref_basis(std::vector<Vector>{vec({1, 0, 0}), vec({0, 1, 0})}, 3);
  const Subspace e23 = rref_basis(std::vector<Vector>{vec({0, 1, 0}), vec({0, 0, 1})}, 3);
  EXPECT_EQ(intersect_spaces(e12, e23), rref_basis(std::vector<Vector>{vec({0, 1, 0})}, 3));
  EXPECT_EQ(sum_spaces(e12, Subspace::zero(3)), e12);
  EXPECT_EQ(intersect_spaces(e12, e12), e12);
  EXPECT_EQ(sum_spaces(e12, e23), Subspace::full(3));
  const Subspace both = intersect_spaces(image(a4()), kernel(a4()));
  EXPECT_EQ(both, image(a4()));
  EXPECT_EQ(both, kernel(a4()));
}

TEST(SumIntersect, AmbientMismatchThrows) {
  EXPECT_THROW(sum_spaces(Subspace::full(2), Subspace::full(3)), DimensionError);
  EXPECT_THROW(intersect_spaces(Subspace::full(2), Subspace::full(3)), DimensionError);
}

TEST(SolveLinear, Examples) {
  EXPECT_EQ(*solve_linear(Matrix::identity(2), vec({3, 4})), vec({3, 4}));
  EXPECT_FALSE(solve_linear(Matrix::zero(2, 2), vec({1, 0})).has_value());
  // A4 x = -u. Free coordinates x1, x3 are zeroed, giving w1; every solution
  // differs from -w2 by an element of ker A4.
  const auto x = solve_linear(a4(), vec({-1, 0, 0, 0}));
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, vec({0, 1, 0, 0}));
  EXPECT_EQ(a4() * *x, vec({-1, 0, 0, 0}));
  EXPECT_TRUE(kernel(a4()).contains(*x - vec({0, 0, -1, 0})));
}

TEST(Determinant, SmallCases) {
  EXPECT_EQ(determinant(Matrix::from_rows({{0, 1}, {1, 0}})), Scalar(-1));
  EXPECT_EQ(determinant(Matrix::from_rows({{2, 1}, {4, 2}})), Scalar(0));
  EXPECT_EQ(determinant(testing::g4()), Scalar(1));
}

// --- properties over random matrices ---------------------------------------

class LinalgProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(LinalgProperties, RankNullity) {
  Rng rng(GetParam());
  for (int t = 0; t < 40; ++t) {
    const auto r = static_cast<std::size_t>(rng.uniform(0, 6));
    const auto c = static_cast<std::size_t>(rng.uniform(1, 6));
    const Matrix m = testing::random_matrix(rng, r, c, 3, 50);
    const Subspace k = kernel(m);
    EXPECT_EQ(k.dim() + rref_basis(m.row_vectors(), c).dim(), c);
    EXPECT_EQ(image(m).dim(), rank(m));
    for (const auto& v : k.basis()) EXPECT_TRUE(is_zero(m * v));
  }
}

TEST_P(LinalgProperties, Canonicity) {
  Rng rng(GetParam());
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform(1, 6));
    auto vs = testing::random_vectors(rng, static_cast<std::size_t>(rng.uniform(0, 5)), n, 3);
    const Subspace s = rref_basis(vs, n);
    EXPECT_EQ(rref_basis(s.basis(), n), s);
    std::reverse(vs.begin(), vs.end());
    for (auto& v : vs) {
      Scalar c(rng.uniform(1, 4), rng.uniform(1, 3));
      c.canonicalize();
      v = c * v;
    }
    EXPECT_EQ(rref_basis(vs, n), s);
  }
}

TEST_P(LinalgProperties, Modularity) {
  Rng rng(GetParam());
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform(1, 7));
    const Subspace a = rref_basis(testing::random_vectors(rng, static_cast<std::size_t>(rng.uniform(0, 4)), n, 2), n);
    const Subspace b = rref_basis(testing::random_vectors(rng, static_cast<std::size_t>(rng.uniform(0, 4)), n, 2), n);
    const Subspace sum = sum_spaces(a, b);
    const Subspace meet = intersect_spaces(a, b);
    EXPECT_EQ(sum.dim() + meet.dim(), a.dim() + b.dim());
    EXPECT_TRUE(a.contains(meet));
    EXPECT_TRUE(b.contains(meet));
    EXPECT_TRUE(sum.contains(a));
    EXPECT_TRUE(sum.contains(b));
  }
}

TEST_P(LinalgProperties, SolveIffInImage) {
  Rng rng(GetParam());
  for (int t = 0; t < 60; ++t) {
    const auto r = static_cast<std::size_t>(rng.uniform(1, 5));
    const auto c = static_cast<std::size_t>(rng.uniform(1, 5));
    const Matrix m = testing::random_matrix(rng, r, c, 2, 60);
    const Vector b = testing::random_vectors(rng, 1, r, 2)[0];
    const auto x = solve_linear(m, b);
    EXPECT_EQ(x.has_value(), image(m).contains(b));
    if (x) {
      EXPECT_EQ(m * *x, b);
    }
  }
}

TEST_P(LinalgProperties, InverseRoundTrip) {
  Rng rng(GetParam());
  for (int t = 0; t < 20; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform(1, 6));
    const Matrix m = testing::random_matrix(rng, n, n, 3, 20);
    const auto inv = inverse(m);
    EXPECT_EQ(inv.has_value(), sgn(determinant(m)) != 0);
    if (inv) {
      EXPECT_EQ(m * *inv, Matrix::identity(n));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, LinalgProperties, ::testing::Values(1u, 2u, 3u, 4u, 5u));

}  // namespace
}  // namespace flathom
