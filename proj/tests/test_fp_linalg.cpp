#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pdescent/fp_linalg.hpp"

using namespace pdescent;

namespace {

FpMatrix matrix(const std::vector<oracle::Vec>& rows, std::size_t cols) { return FpMatrix::from_rows(rows, cols); }

}  // namespace

TEST(PrimeModulus, RejectsNonPrimes) {
  EXPECT_THROW(PrimeModulus(0), InvalidModulusError);
  EXPECT_THROW(PrimeModulus(1), InvalidModulusError);
  EXPECT_THROW(PrimeModulus(4), InvalidModulusError);
  EXPECT_THROW(PrimeModulus(65537), InvalidModulusError);
  EXPECT_NO_THROW(PrimeModulus(65521));
}

TEST(PrimeModulus, Arithmetic) {
  const PrimeModulus p(7);
  EXPECT_EQ(p.reduce(-1), 6u);
  EXPECT_EQ(p.mul(5, 3), 1u);
  for (Residue a = 1; a < 7; ++a) EXPECT_EQ(p.mul(a, p.inv(a)), 1u);
  EXPECT_EQ(p.pow(3, 6), 1u);
}

TEST(Rref, IdentityHasFullRank) {
  FpMatrix m(3, 3);
  for (std::size_t i = 0; i < 3; ++i) m(i, i) = 1;
  EXPECT_EQ(rref_rank(m, PrimeModulus(2)).rank, 3u);
}

TEST(Rref, EqualRows) { EXPECT_EQ(rank_of(matrix({{1, 1}, {1, 1}}, 2), PrimeModulus(2)), 1u); }

TEST(Rref, PivotsAreFirstNonzeroColumns) {
  const auto r = rref_rank(matrix({{0, 2, 1}, {0, 1, 1}}, 3), PrimeModulus(3));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(r.echelon.row_vector(0), (FpVector{0, 1, 0}));
}

TEST(Rref, RandomRankMatchesLargestIndependentSubset) {
  std::mt19937_64 rng(11);
  const PrimeModulus p(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rows = oracle::random_rows(rng, 3, 5, 7);
    EXPECT_EQ(rank_of(matrix(rows, 7), p), oracle::rank_by_subsets(rows, 3, 7));
  }
}

TEST(Kernel, ZeroMap) { EXPECT_EQ(kernel_basis(FpMatrix(2, 3), PrimeModulus(2)).dim(), 3u); }

TEST(Kernel, TwoByThree) {
  const auto k = kernel_basis(matrix({{1, 1, 0}, {0, 1, 1}}, 3), PrimeModulus(2));
  ASSERT_EQ(k.dim(), 1u);
  std::vector<oracle::Vec> solutions;
  oracle::for_each_vector(2, 3, [&](const oracle::Vec& x) {
    if ((x[0] + x[1]) % 2 == 0 && (x[1] + x[2]) % 2 == 0 && !oracle::is_zero(x)) solutions.push_back(x);
  });
  ASSERT_EQ(solutions.size(), 1u);
  EXPECT_EQ(k.basis().row_vector(0), solutions[0]);
}

TEST(Kernel, InvertibleOverF5) {
  EXPECT_EQ(kernel_basis(matrix({{1, 2, 0}, {0, 1, 3}, {4, 0, 2}}, 3), PrimeModulus(5)).dim(), 0u);
}

TEST(Kernel, RankNullity) {
  std::mt19937_64 rng(5);
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const PrimeModulus p(q);
    for (int t = 0; t < 10; ++t) {
      const auto rows = oracle::random_rows(rng, q, 3, 6);
      const auto m = matrix(rows, 6);
      const auto k = kernel_basis(m, p);
      EXPECT_EQ(k.dim() + rank_of(m, p), 6u);
      for (std::size_t r = 0; r < k.dim(); ++r) EXPECT_TRUE(oracle::is_zero(apply(m, k.basis().row_vector(r), p)));
    }
  }
}

TEST(Solve, FindsSolutionOrNone) {
  const PrimeModulus p(5);
  const auto m = matrix({{1, 2}, {2, 4}}, 2);
  const auto x = solve(m, FpVector{3, 1}, p);
  ASSERT_TRUE(x);
  EXPECT_EQ(apply(m, *x, p), (FpVector{3, 1}));
  EXPECT_FALSE(solve(m, FpVector{1, 1}, p));
}

TEST(Subspace, SupportOfTwoGenerators) {
  const auto w = FpSubspace::span(std::vector<FpVector>{{1, 1, 0}, {0, 1, 1}}, 3, PrimeModulus(2));
  const auto elements = oracle::span_elements({{1, 1, 0}, {0, 1, 1}}, 2, 3);
  EXPECT_EQ(elements.size(), 4u);
  const auto supp = subspace_support(w);
  EXPECT_EQ(std::set<std::size_t>(supp.begin(), supp.end()), oracle::support_of(elements));
  EXPECT_EQ(supp.size(), 3u);
}

TEST(Subspace, ZeroSubspaceHasEmptySupport) {
  EXPECT_TRUE(subspace_support(FpSubspace(PrimeModulus(3), 4)).empty());
  EXPECT_EQ(support_sum_oracle(FpSubspace(PrimeModulus(3), 4)), Rational(0));
}

TEST(Subspace, LineSupportIsGeneratorSupport) {
  const FpVector phi{0, 2, 0, 1, 4};
  const auto w = FpSubspace::span(std::vector<FpVector>{phi}, 5, PrimeModulus(5));
  EXPECT_EQ(subspace_support(w), (std::vector<std::size_t>{1, 3, 4}));
  EXPECT_EQ(support_sum_oracle(w), Rational(3));
}

TEST(Subspace, DisjointSupportsAdd) {
  const auto w = FpSubspace::span(std::vector<FpVector>{{1, 1, 0, 0, 0}, {0, 0, 1, 1, 1}}, 5, PrimeModulus(2));
  EXPECT_EQ(support_sum_oracle(w), Rational(5));
}

TEST(Subspace, SupportSumMatchesEnumeration) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const auto gens = oracle::random_rows(rng, 3, 3, 6);
    const auto w = FpSubspace::span(gens, 6, PrimeModulus(3));
    const auto brute = oracle::support_of(oracle::span_elements(gens, 3, 6)).size();
    EXPECT_EQ(subspace_support(w).size(), brute);
    EXPECT_EQ(support_sum_oracle(w), Rational(static_cast<std::int64_t>(brute)));
  }
}

TEST(Subspace, ElementsAndMembership) {
  std::mt19937_64 rng(3);
  const auto gens = oracle::random_rows(rng, 5, 2, 4);
  const auto w = FpSubspace::span(gens, 4, PrimeModulus(5));
  const auto brute = oracle::span_elements(gens, 5, 4);
  std::set<oracle::Vec> seen;
  w.for_each_element([&](const FpVector& v) { seen.insert(v); });
  EXPECT_EQ(seen, brute);
  oracle::for_each_vector(5, 4, [&](const oracle::Vec& v) { EXPECT_EQ(w.contains(v), brute.count(v) == 1); });
}

TEST(Subspace, EnumerationCap) {
  FpMatrix id(21, 21);
  for (std::size_t i = 0; i < 21; ++i) id(i, i) = 1;
  const auto w = FpSubspace::span(id, PrimeModulus(2));
  EXPECT_THROW(w.for_each_element([](const FpVector&) {}), EnumerationRefused);
}

TEST(Subspace, EchelonFormIsCanonical) {
  const PrimeModulus p(3);
  const auto a = FpSubspace::span(std::vector<FpVector>{{1, 2, 0}, {0, 1, 1}}, 3, p);
  const auto b = FpSubspace::span(std::vector<FpVector>{{1, 0, 1}, {2, 1, 1}}, 3, p);
  EXPECT_EQ(a.contains(b), b.contains(a));
  if (a.contains(b)) EXPECT_EQ(a, b);
}
