#include "hkpr/poisson.hpp"
#include "hkpr/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace hkpr;

TEST(PoissonWeights, ZeroTemperatureIsPointMass) {
  const auto w = poisson_weights(0.0, 5);
  EXPECT_EQ(w[0], 1.0);
  for (std::size_t k = 1; k < w.size(); ++k) EXPECT_EQ(w[k], 0.0);
}

TEST(PoissonWeights, FirstTerm) { EXPECT_NEAR(poisson_weights(1.0, 3)[0], std::exp(-1.0), 1e-15); }

TEST(PoissonWeights, SumsToOne) {
  const auto w = poisson_weights(5.0, 60);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
}

TEST(PoissonWeights, MatchesDirectFormulaAtLargeT) {
  // lgamma-based oracle, independent of the recurrence
  const double t = 84.9;
  const auto w = poisson_weights(t, 200);
  for (std::size_t k : {0u, 10u, 84u, 85u, 150u}) {
    const double direct = std::exp(-t + static_cast<double>(k) * std::log(t) - std::lgamma(k + 1.0));
    EXPECT_NEAR(w[k], direct, 1e-12 * std::max(direct, 1e-300) + 1e-300) << "k=" << k;
  }
}

TEST(PoissonTruncation, TailBelowTolerance) {
  for (double t : {0.5, 1.0, 5.0, 30.0, 84.9, 200.0}) {
    const std::size_t n = poisson_truncation(t, 1e-9);
    const auto w = poisson_weights(t, n + 400);
    double tail = 0.0;
    for (std::size_t k = n + 1; k < w.size(); ++k) tail += w[k];
    EXPECT_LT(tail, 1e-9) << "t=" << t;
    EXPECT_GE(static_cast<double>(n), t) << "t=" << t;
  }
}

TEST(PoissonSampler, ZeroRateAlwaysZero) {
  SplitMix64 gen(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_walk_length(0.0, gen), 0u);
  EXPECT_THROW(sample_walk_length(-1.0, gen), InvalidArgument);
}

TEST(PoissonSampler, MeanWithinThreeSigmaLargeRate) {
  SplitMix64 gen(2024);
  const double t = 84.9;
  const int draws = 100000;
  double total = 0.0;
  for (int i = 0; i < draws; ++i) total += static_cast<double>(sample_walk_length(t, gen));
  EXPECT_NEAR(total / draws, t, 3.0 * std::sqrt(t / draws));
}

TEST(PoissonSampler, Deterministic) {
  SplitMix64 a(77), b(77);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_walk_length(12.5, a), sample_walk_length(12.5, b));
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_walk_length(50.0, a), sample_walk_length(50.0, b));
}

// Chi-square goodness of fit against the exact pmf, both sampler branches.
TEST(PoissonSampler, MatchesPmf) {
  for (double t : {0.7, 4.0, 25.0, 31.0, 84.9, 400.0}) {
    SplitMix64 gen(derive_seed(9, {static_cast<std::uint64_t>(t * 10)}));
    const int draws = 200000;
    const auto k_max = static_cast<std::size_t>(t + 12.0 * std::sqrt(t) + 20.0);
    std::vector<double> observed(k_max + 1, 0.0);
    for (int i = 0; i < draws; ++i) observed[std::min<std::size_t>(sample_walk_length(t, gen), k_max)] += 1.0;
    std::vector<double> expected(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k)
      expected[k] = draws * std::exp(-t + static_cast<double>(k) * std::log(t) - std::lgamma(k + 1.0));
    // pool cells with small expectation
    double chi2 = 0.0, obs_pool = 0.0, exp_pool = 0.0;
    int cells = 0;
    for (std::size_t k = 0; k <= k_max; ++k) {
      obs_pool += observed[k];
      exp_pool += expected[k];
      if (exp_pool >= 20.0) {
        chi2 += (obs_pool - exp_pool) * (obs_pool - exp_pool) / exp_pool;
        obs_pool = exp_pool = 0.0;
        ++cells;
      }
    }
    const double dof = cells - 1;
    // mean + 5 standard deviations of the chi-square distribution
    EXPECT_LT(chi2, dof + 5.0 * std::sqrt(2.0 * dof)) << "t=" << t;
  }
}

TEST(Rng, UniformBelowInRangeAndUnbiased) {
  SplitMix64 gen(3);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[uniform_below(gen, 7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(gen);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, {0}), derive_seed(1, {1}));
  EXPECT_NE(derive_seed(1, {0}), derive_seed(2, {0}));
  EXPECT_EQ(derive_seed(5, {1, 2}), derive_seed(5, {1, 2}));
  auto a = substream(5, 0);
  auto b = substream(5, 1);
  EXPECT_NE(a(), b());
}
