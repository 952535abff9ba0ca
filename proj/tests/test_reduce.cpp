#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "pdescent/reduce.hpp"

using namespace pdescent;

namespace {

FpSubspace span_of(const std::vector<oracle::Vec>& rows, std::size_t n, std::uint32_t q) {
  return FpSubspace::span(rows, n, PrimeModulus(q));
}

std::vector<oracle::Vec> rows_of(const FpSubspace& s) {
  std::vector<oracle::Vec> out;
  for (std::size_t r = 0; r < s.dim(); ++r) out.push_back(s.basis().row_vector(r));
  return out;
}

}  // namespace

TEST(Hyperplane, FullSpaceF2Cubed) {
  const auto v = span_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3, 2);
  const auto h = best_hyperplane(v);
  EXPECT_EQ(h.subspace.dim(), 2u);
  EXPECT_LE(h.support, 2u);
  EXPECT_TRUE(h.bound_certified);
  const auto all = oracle::hyperplane_supports(rows_of(v), 2, 3);
  EXPECT_EQ(all.size(), 7u);
  EXPECT_EQ(h.support, *std::min_element(all.begin(), all.end()));
}

TEST(Hyperplane, PlaneInF2CubedMeetsBoundWithEquality) {
  const auto v = span_of({{1, 1, 0}, {0, 1, 1}}, 3, 2);
  const auto all = oracle::hyperplane_supports(rows_of(v), 2, 3);
  EXPECT_EQ(all, (std::vector<std::size_t>{2, 2, 2}));
  const auto h = best_hyperplane(v);
  EXPECT_EQ(h.support, 2u);
  EXPECT_TRUE(chain_bound_holds(2, 2, 1, 2, 3));
  EXPECT_FALSE(chain_bound_holds(2, 2, 1, 3, 3));
}

TEST(Hyperplane, DisjointSingletons) {
  const auto h = best_hyperplane(span_of({{1, 0}, {0, 1}}, 2, 2));
  EXPECT_EQ(h.support, 1u);
}

TEST(Hyperplane, RejectsDimensionOne) {
  EXPECT_THROW(best_hyperplane(span_of({{1, 1}}, 2, 3)), DimensionError);
}

TEST(Hyperplane, ScoresMatchOracle) {
  std::mt19937_64 rng(8);
  for (std::uint32_t q : {2u, 3u, 5u}) {
    for (int t = 0; t < 15; ++t) {
      const std::size_t dim = 2 + t % 2, n = 6;
      const auto gens = oracle::random_independent(rng, q, dim, n);
      const auto v = span_of(gens, n, q);
      auto brute = oracle::hyperplane_supports(rows_of(v), q, n);
      std::vector<std::size_t> lib;
      for_each_hyperplane_support(v, [&](const FpVector&, std::size_t s) { lib.push_back(s); });
      std::sort(brute.begin(), brute.end());
      std::sort(lib.begin(), lib.end());
      EXPECT_EQ(lib, brute);
      const auto h = best_hyperplane(v);
      EXPECT_EQ(h.support, brute.front());
      EXPECT_EQ(subspace_support(h.subspace).size(), h.support);
      EXPECT_TRUE(v.contains(h.subspace));
    }
  }
}

TEST(Hyperplane, AveragingIdentity) {
  std::mt19937_64 rng(13);
  for (std::uint32_t q : {2u, 3u, 5u}) {
    for (std::size_t dim = 1; dim <= 3; ++dim) {
      const auto gens = oracle::random_independent(rng, q, dim, 7);
      const auto v = span_of(gens, 7, q);
      const auto all = oracle::hyperplane_supports(rows_of(v), q, 7);
      const auto total = std::accumulate(all.begin(), all.end(), std::uint64_t{0});
      const auto pv = oracle::ipow(q, dim);
      EXPECT_EQ(total, (pv - q) / (q - 1) * subspace_support(v).size());
    }
  }
}

TEST(Hyperplane, SampledModeIsReproducible) {
  std::mt19937_64 gen(4);
  const auto v = span_of(oracle::random_independent(gen, 3, 4, 9), 9, 3);
  std::mt19937_64 a(77), b(77);
  const auto ha = best_hyperplane(v, SearchMode::sampled, &a, 16);
  const auto hb = best_hyperplane(v, SearchMode::sampled, &b, 16);
  EXPECT_EQ(ha.functional, hb.functional);
  EXPECT_EQ(ha.subspace, hb.subspace);
  EXPECT_GE(ha.support, best_hyperplane(v).support);
}

TEST(Reduce, FullSpaceToLine) {
  std::vector<oracle::Vec> id(4, oracle::Vec(4, 0));
  for (std::size_t i = 0; i < 4; ++i) id[i][i] = 1;
  const auto r = reduce_to_dimension(span_of(id, 4, 2), 1);
  EXPECT_EQ(r.subspace.dim(), 1u);
  EXPECT_EQ(r.support, 1u);
  EXPECT_TRUE(r.chain_bound_met);
}

TEST(Reduce, SingleStepMatchesHyperplane) {
  std::mt19937_64 rng(6);
  const auto v = span_of(oracle::random_independent(rng, 3, 3, 6), 6, 3);
  const auto r = reduce_to_dimension(v, 2);
  const auto h = best_hyperplane(v);
  EXPECT_EQ(r.subspace, h.subspace);
  EXPECT_EQ(r.step_supports, (std::vector<std::size_t>{h.support}));
  EXPECT_DOUBLE_EQ(r.chain_factor, chain_factor(3, 3, 2));
}

TEST(Reduce, PlotkinLineInF3) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const auto gens = oracle::random_independent(rng, 3, 3, 5);
    const auto v = span_of(gens, 5, 3);
    const auto r = reduce_to_dimension(v, 1);
    const auto sv = subspace_support(v).size();
    // (p^2 - p)/(p^2 - 1) = 6/8 bounds the best line, which the oracle finds among all 13
    EXPECT_LE(8 * oracle::min_line_support(gens, 3, 5), 6 * sv);
    EXPECT_LE(r.support * 26, sv * 18);  // chain factor (27 - 9)/(27 - 1) for w = 1, v = 3
    EXPECT_TRUE(r.chain_bound_met);
    EXPECT_EQ(oracle::rank(rows_of(r.subspace), 3, 5), 1u);
    EXPECT_TRUE(v.contains(r.subspace));
  }
}

TEST(Reduce, RejectsBadTargets) {
  const auto v = span_of({{1, 0, 0}, {0, 1, 0}}, 3, 2);
  EXPECT_THROW(reduce_to_dimension(v, 0), DimensionError);
  EXPECT_THROW(reduce_to_dimension(v, 2), DimensionError);
}

TEST(Reduce, Factors) {
  EXPECT_EQ(plotkin_factor(2, 2), Rational(6, 7));
  EXPECT_EQ(plotkin_factor(3, 1), Rational(6, 8));
  EXPECT_NEAR(chain_factor(2, 4, 1), 8.0 / 15.0, 1e-12);
}

TEST(Reduce, ChainBoundLargeExponents) {
  // p^v far beyond 64 bits: the bound tends to (1 - p^-w) s_v
  EXPECT_TRUE(chain_bound_holds(65521, 40, 39, 99, 100));
  EXPECT_FALSE(chain_bound_holds(65521, 40, 39, 100, 100));
  EXPECT_FALSE(chain_bound_holds(2, 80, 1, 60, 100));
  EXPECT_TRUE(chain_bound_holds(2, 80, 1, 50, 100));
}
