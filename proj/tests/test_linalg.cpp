#include <random>

#include <gtest/gtest.h>

#include "k3mirror/linalg.hpp"

using namespace k3m;

namespace {

// Leibniz expansion: independent of the elimination code.
Integer leibniz(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Integer total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += p[i] > p[j];
    Integer term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= m(i, p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

bool is_unimodular(const IntMatrix& m) {
  const Integer d = determinant(m);
  return d == 1 || d == -1;
}

}  // namespace

TEST(Determinant, AgreesWithLeibnizExpansion) {
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 5;
    const IntMatrix m = random_matrix(rng, n, n, -6, 6);
    EXPECT_EQ(determinant(m), leibniz(m));
  }
}

TEST(Determinant, KnownValues) {
  EXPECT_EQ(determinant(IntMatrix{{2, 0, 1, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 8}}), 256);
  EXPECT_EQ(determinant(IntMatrix{{-2, 1}, {1, -2}}), 3);
}

TEST(SmithForm, FactorsDivideAndMultiplyToDeterminant) {
  std::mt19937 rng(11);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + t % 5;
    const IntMatrix m = random_matrix(rng, n, n, -5, 5);
    const SmithForm s = smith_form(m);
    EXPECT_EQ(s.left * m * s.right, s.diag);
    EXPECT_TRUE(is_unimodular(s.left));
    EXPECT_TRUE(is_unimodular(s.right));
    for (std::size_t i = 1; i < s.divisors.size(); ++i) EXPECT_EQ(s.divisors[i] % s.divisors[i - 1], 0);
    const Integer d = determinant(m);
    if (d != 0) {
      Integer prod = 1;
      for (const auto& x : s.divisors) prod *= x;
      EXPECT_EQ(prod, abs_int(d));
    }
  }
}

TEST(SmithForm, A3GramHasCyclicCokernel) {
  const SmithForm s = smith_form(IntMatrix{{-2, 1, 0}, {1, -2, 1}, {0, 1, -2}});
  EXPECT_EQ(s.divisors, (std::vector<Integer>{1, 1, 4}));
}

TEST(HermiteForm, RowSpanAndRank) {
  std::mt19937 rng(3);
  for (int t = 0; t < 150; ++t) {
    const IntMatrix m = random_matrix(rng, 2 + t % 4, 1 + t % 5, -4, 4);
    const HermiteForm h = hermite_form(m);
    EXPECT_EQ(h.transform * m, h.form);
    EXPECT_TRUE(is_unimodular(h.transform));
    EXPECT_EQ(h.rank, rank(m));
    for (std::size_t i = h.rank; i < m.rows(); ++i) EXPECT_TRUE(h.form.is_zero_row(i));
  }
}

TEST(IntegerKernel, KernelVectorsAreAnnihilated) {
  std::mt19937 rng(5);
  for (int t = 0; t < 100; ++t) {
    const IntMatrix m = random_matrix(rng, 1 + t % 3, 3 + t % 3, -3, 3);
    const IntMatrix k = integer_kernel(m);
    EXPECT_EQ(k.rows(), m.cols() - rank(m));
    EXPECT_TRUE((m * k.transpose()).is_zero_row(0) || m.rows() == 0);
    const IntMatrix prod = m * k.transpose();
    for (std::size_t i = 0; i < prod.rows(); ++i) EXPECT_TRUE(prod.is_zero_row(i));
  }
}

TEST(IntegerCoordinates, DetectsNonIntegralCombinations) {
  const IntMatrix b{{2, 0}, {0, 1}};
  EXPECT_TRUE(integer_coordinates(b, {4, 3}).has_value());
  EXPECT_FALSE(integer_coordinates(b, {1, 0}).has_value());
}
