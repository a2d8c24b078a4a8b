#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "../oracles.hpp"
#include "blic/potts.hpp"
#include "blic/rng.hpp"

namespace blic {
namespace {

PottsSpec spec(std::size_t h, std::size_t w, Neighborhood g, int K, double psi) {
  return PottsSpec{Lattice(h, w), g, K, psi};
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(SufficientStatistic, SpecExamples) {
  const Lattice lat(2, 2);
  const std::vector<int> constant{1, 1, 1, 1}, checker{0, 1, 1, 0};
  EXPECT_EQ(sufficient_statistic(constant, lat, Neighborhood::G4, 2), 4u);
  EXPECT_EQ(sufficient_statistic(constant, lat, Neighborhood::G8, 2), 6u);
  EXPECT_EQ(sufficient_statistic(checker, lat, Neighborhood::G8, 2), 2u);
}

TEST(SufficientStatistic, AgreesWithOracleOnRandomFields) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const int h = 1 + rng.uniform_int(5), w = 1 + rng.uniform_int(5), K = 2 + rng.uniform_int(3);
    std::vector<int> x(h * w);
    for (int& v : x) v = rng.uniform_int(K);
    for (bool diag : {false, true}) {
      EXPECT_EQ(sufficient_statistic(x, Lattice(h, w), diag ? Neighborhood::G8 : Neighborhood::G4, K),
                static_cast<std::size_t>(oracle::matches({h, w, diag}, x)));
    }
  }
}

TEST(SufficientStatistic, ColorOutOfRange) {
  const std::vector<int> bad{0, 2, 0, 0};
  EXPECT_THROW(sufficient_statistic(bad, Lattice(2, 2), Neighborhood::G4, 2), std::invalid_argument);
}

TEST(ConditionedStatistic, SingleSiteBorder) {
  const Lattice lat(3, 3);
  const Block blk{1, 1, 1, 1};
  const BorderCondition border({{1, 0}, {3, 0}, {5, 0}, {7, 0}});
  const std::vector<int> zero{0}, one{1};
  EXPECT_EQ(conditioned_statistic(zero, lat, blk, Neighborhood::G4, 2, &border), 4u);
  EXPECT_EQ(conditioned_statistic(one, lat, blk, Neighborhood::G4, 2, &border), 0u);
  EXPECT_EQ(conditioned_statistic(zero, lat, blk, Neighborhood::G4, 2, nullptr), 0u);
}

TEST(ConditionedStatistic, TwoByTwoInFourByFour) {
  const Lattice lat(4, 4);
  const std::vector<int> field(16, 2);
  const std::vector<int> block(4, 2);
  // corner block: 4 internal + 4 crossing edges
  const Block corner{0, 0, 2, 2};
  const auto bc = BorderCondition::from_field(lat, corner, Neighborhood::G4, field);
  EXPECT_EQ(conditioned_statistic(block, lat, corner, Neighborhood::G4, 3, &bc), 8u);
  // interior block: 4 internal + 8 crossing edges
  const Block mid{1, 1, 2, 2};
  const auto bm = BorderCondition::from_field(lat, mid, Neighborhood::G4, field);
  EXPECT_EQ(conditioned_statistic(block, lat, mid, Neighborhood::G4, 3, &bm), 12u);
}

TEST(ConditionedStatistic, BorderDomainMismatch) {
  const Lattice lat(3, 3);
  const Block blk{1, 1, 1, 1};
  const BorderCondition partial({{1, 0}, {3, 0}});
  const std::vector<int> zero{0};
  EXPECT_THROW(conditioned_statistic(zero, lat, blk, Neighborhood::G4, 2, &partial),
               std::invalid_argument);
}

TEST(BruteForce, SpecExamples) {
  EXPECT_NEAR(log_partition_bruteforce(spec(2, 2, Neighborhood::G4, 2, 0.0)), std::log(16.0), 1e-12);
  for (double psi : {0.3, 1.0, 2.5}) {
    const double expected = std::log(2 * std::exp(4 * psi) + 12 * std::exp(2 * psi) + 2);
    EXPECT_NEAR(log_partition_bruteforce(spec(2, 2, Neighborhood::G4, 2, psi)), expected, 1e-12);
  }
  const auto s = spec(3, 3, Neighborhood::G4, 2, 0.8);
  const Block blk{1, 1, 1, 1};
  const BorderCondition border({{1, 0}, {3, 0}, {5, 0}, {7, 0}});
  EXPECT_NEAR(log_partition_bruteforce(s, &blk, nullptr, &border), std::log(std::exp(3.2) + 1), 1e-12);
}

TEST(BruteForce, EnumerationBound) {
  EXPECT_THROW(log_partition_bruteforce(spec(6, 6, Neighborhood::G4, 2, 0.5)), std::length_error);
}

TEST(Recursion, SpecExamples) {
  EXPECT_NEAR(log_partition_recursive(spec(4, 4, Neighborhood::G8, 4, 0.0), Block{0, 0, 4, 4}),
              16 * std::log(4.0), 1e-12);
  EXPECT_NEAR(log_partition_recursive(spec(2, 2, Neighborhood::G4, 2, 1.0), Block{0, 0, 2, 2}),
              std::log(2 * std::exp(4.0) + 12 * std::exp(2.0) + 2), 1e-12);
}

TEST(Recursion, LagAndFeasibility) {
  EXPECT_EQ(recursion_lag(Block{0, 0, 4, 9}, Neighborhood::G4), 4u);
  EXPECT_EQ(recursion_lag(Block{0, 0, 9, 3}, Neighborhood::G8), 4u);
  EXPECT_TRUE(recursion_feasible(Block{0, 0, 4, 4}, Neighborhood::G8, 4));
  EXPECT_TRUE(recursion_feasible(Block{0, 0, 2, 2}, Neighborhood::G8, 7));
  EXPECT_FALSE(recursion_feasible(Block{0, 0, 12, 12}, Neighborhood::G4, 4));
  EXPECT_THROW(log_partition_recursive(spec(12, 12, Neighborhood::G4, 4, 0.5), Block{0, 0, 12, 12}),
               std::length_error);
}

// Property: recursion == independent enumeration with random potentials and borders.
TEST(Recursion, MatchesOracleRandomized) {
  Rng rng(11);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const int H = 1 + rng.uniform_int(5), W = 1 + rng.uniform_int(5);
    const int h = 1 + rng.uniform_int(std::min(H, 3)), w = 1 + rng.uniform_int(std::min(W, 3));
    const int r0 = rng.uniform_int(H - h + 1), c0 = rng.uniform_int(W - w + 1);
    const int K = 2 + rng.uniform_int(2);
    const bool diag = rng.uniform() < 0.5;
    const double psi = std::array{0.0, 0.5, 1.0}[rng.uniform_int(3)];
    const Neighborhood g = diag ? Neighborhood::G8 : Neighborhood::G4;
    const auto s = spec(H, W, g, K, psi);
    const Block blk{static_cast<std::size_t>(r0), static_cast<std::size_t>(c0),
                    static_cast<std::size_t>(h), static_cast<std::size_t>(w)};

    const bool use_pot = rng.uniform() < 0.7, use_border = rng.uniform() < 0.7;
    SitePotentials pot(H * W, K);
    std::vector<std::vector<double>> opot;
    if (use_pot) {
      opot.assign(H * W, std::vector<double>(K));
      for (int i = 0; i < H * W; ++i)
        for (int k = 0; k < K; ++k) pot(i, k) = opot[i][k] = oracle::log_gauss(rng.normal(), k, 0.7);
    }
    std::vector<int> field(H * W);
    for (int& v : field) v = rng.uniform_int(K);
    std::vector<int> outside;
    BorderCondition border;
    if (use_border) {
      border = BorderCondition::from_field(s.lattice, blk, g, field);
      outside = field;
    }
    const double expected = oracle::block_log_partition({H, W, diag}, r0, c0, h, w, K, psi, opot, outside);
    const double rec = log_partition_recursive(s, blk, use_pot ? &pot : nullptr, use_border ? &border : nullptr);
    const double bf = log_partition_bruteforce(s, &blk, use_pot ? &pot : nullptr, use_border ? &border : nullptr);
    EXPECT_LE(rel_err(rec, expected), 1e-9) << H << "x" << W << " block " << h << "x" << w;
    EXPECT_LE(rel_err(bf, expected), 1e-9);
    ++checked;
  }
  EXPECT_EQ(checked, 300);
}

TEST(Recursion, LongBlocksMatchBruteForce) {
  Rng rng(5);
  for (auto [h, w] : {std::pair{2, 7}, {7, 2}, {3, 4}, {4, 3}, {1, 13}}) {
    for (Neighborhood g : {Neighborhood::G4, Neighborhood::G8}) {
      const auto s = spec(h, w, g, 3, 0.9);
      SitePotentials pot(h * w, 3);
      for (std::size_t i = 0; i < pot.num_sites(); ++i)
        for (int k = 0; k < 3; ++k) pot(i, k) = rng.normal();
      const Block blk{0, 0, static_cast<std::size_t>(h), static_cast<std::size_t>(w)};
      EXPECT_LE(rel_err(log_partition_recursive(s, blk, &pot), log_partition_bruteforce(s, &blk, &pot)),
                1e-9);
    }
  }
}

TEST(Invariants, PsiZeroIsUniform) {
  for (int K : {2, 3, 5})
    EXPECT_DOUBLE_EQ(log_partition_recursive(spec(3, 4, Neighborhood::G8, K, 0.0), Block{0, 0, 3, 4}),
                     12 * std::log(static_cast<double>(K)));
}

TEST(Invariants, MonotoneInPsi) {
  const Lattice lat(4, 4);
  const Block blk{1, 1, 2, 2};
  const std::vector<int> constant(16, 1);
  for (Neighborhood g : {Neighborhood::G4, Neighborhood::G8}) {
    const auto border = BorderCondition::from_field(lat, blk, g, constant);
    double prev = -INFINITY, prev_empty = -INFINITY;
    for (double psi = 0.0; psi <= 3.0; psi += 0.25) {
      const PottsSpec s{lat, g, 3, psi};
      const double z = log_partition_recursive(s, blk, nullptr, &border);
      const double ze = log_partition_recursive(s, blk);
      EXPECT_GE(z, prev);
      EXPECT_GE(ze, prev_empty);
      prev = z;
      prev_empty = ze;
    }
  }
}

TEST(Invariants, ConstantShiftAtOneSite) {
  Rng rng(2);
  const auto s = spec(3, 3, Neighborhood::G8, 3, 0.7);
  SitePotentials pot(9, 3);
  for (Site i = 0; i < 9; ++i)
    for (int k = 0; k < 3; ++k) pot(i, k) = rng.normal();
  const Block blk{0, 0, 3, 3};
  const double base = log_partition_recursive(s, blk, &pot);
  for (int k = 0; k < 3; ++k) pot(4, k) += 1.75;
  EXPECT_NEAR(log_partition_recursive(s, blk, &pot), base + 1.75, 1e-12);
}

TEST(Invariants, ColorPermutation) {
  Rng rng(9);
  const Lattice lat(4, 5);
  const Block blk{1, 1, 2, 3};
  const int K = 3;
  const std::array<int, 3> perm{2, 0, 1};
  for (Neighborhood g : {Neighborhood::G4, Neighborhood::G8}) {
    const PottsSpec s{lat, g, K, 0.6};
    SitePotentials pot(lat.size(), K), ppot(lat.size(), K);
    std::vector<int> field(lat.size()), pfield(lat.size());
    for (Site i = 0; i < lat.size(); ++i) {
      field[i] = rng.uniform_int(K);
      pfield[i] = perm[field[i]];
      for (int k = 0; k < K; ++k) ppot(i, perm[k]) = pot(i, k) = rng.normal();
    }
    const auto b = BorderCondition::from_field(lat, blk, g, field);
    const auto pb = BorderCondition::from_field(lat, blk, g, pfield);
    EXPECT_NEAR(log_partition_recursive(s, blk, &pot, &b), log_partition_recursive(s, blk, &ppot, &pb),
                1e-12);
  }
}

TEST(PottsSpec, Validation) {
  EXPECT_THROW(spec(2, 2, Neighborhood::G4, 1, 0.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(spec(2, 2, Neighborhood::G4, 2, -0.5).validate());
}

}  // namespace
}  // namespace blic
