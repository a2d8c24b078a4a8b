#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "../oracles.hpp"
#include "blic/abc.hpp"

namespace blic {
namespace {

const EmissionParams kPhi = EmissionParams::integer_means(2, 0.39);

TEST(Summary2d, ConstantField) {
  const std::vector<double> y(25, 0.3);
  const auto s = summary_2d(y, Lattice(5, 5), kPhi);
  EXPECT_EQ(s[0], 1.0);
  EXPECT_EQ(s[1], 1.0);
}

TEST(Summary2d, Checkerboard) {
  for (int side : {6, 10, 40}) {
    std::vector<double> y;
    std::vector<int> x;
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) {
        x.push_back((r + c) % 2);
        y.push_back((r + c) % 2);
      }
    const oracle::Grid g8{side, side, true};
    const double edges8 = oracle::matches(g8, std::vector<int>(side * side, 0));
    const auto s = summary_2d(y, Lattice(side, side), kPhi);
    EXPECT_EQ(s[0], 0.0);
    EXPECT_DOUBLE_EQ(s[1], oracle::matches(g8, x) / edges8);
    // diagonals are 2 of the 4 G8 edges per interior site
    EXPECT_DOUBLE_EQ(s[1], (2.0 * (side - 1) * (side - 1)) / (2.0 * side * (side - 1) + 2.0 * (side - 1) * (side - 1)));
  }
}

TEST(Summary2d, WithinUnitInterval) {
  Rng rng(2);
  std::vector<double> y(64);
  for (double& v : y) v = rng.normal();
  const auto s = summary_2d(y, Lattice(8, 8), kPhi);
  for (double v : s) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

ReferenceTable small_table(std::size_t size, std::uint64_t seed, GraphPriors priors = {},
                           const EmissionParams& phi = kPhi) {
  return build_table(size, priors, Lattice(16, 16), phi, seed, {60, 1});
}

TEST(BuildTable, ZeroSizeRejected) {
  EXPECT_THROW(build_table(0, {}, Lattice(8, 8), kPhi, 1), std::invalid_argument);
}

TEST(BuildTable, DeterministicAndThreadIndependent) {
  const auto a = build_table(40, {}, Lattice(12, 12), kPhi, 5, {30, 1});
  const auto b = build_table(40, {}, Lattice(12, 12), kPhi, 5, {30, 3});
  ASSERT_EQ(a.rows.size(), 40u);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(a.rows[i].model, b.rows[i].model);
    EXPECT_EQ(a.rows[i].psi, b.rows[i].psi);
    EXPECT_EQ(a.rows[i].summary, b.rows[i].summary);
  }
}

TEST(BuildTable, LabelsBalancedAndPsiInPrior) {
  const auto t = small_table(400, 9);
  std::size_t g8 = 0;
  for (const auto& r : t.rows) {
    const auto& prior = t.priors[r.model.system];
    EXPECT_GE(r.psi, prior.lower);
    EXPECT_LE(r.psi, prior.upper);
    EXPECT_EQ(r.model.num_colors, 2);
    g8 += r.model.system == Neighborhood::G8;
  }
  EXPECT_NEAR(g8 / 400.0, 0.5, 3 * std::sqrt(0.25 / 400));
}

ReferenceRow row(Neighborhood g, double a, double b) { return {{g, 2}, 0.5, {a, b}}; }

TEST(Knn, ExactRowWithKOne) {
  ReferenceTable t;
  t.rows = {row(Neighborhood::G4, 0.1, 0.2), row(Neighborhood::G8, 0.5, 0.4), row(Neighborhood::G4, 0.9, 0.7)};
  EXPECT_EQ(knn_classify(t, {0.5, 0.4}, 1).system, Neighborhood::G8);
}

TEST(Knn, FullTableIsMajority) {
  ReferenceTable t;
  t.rows = {row(Neighborhood::G8, 0.1, 0.2), row(Neighborhood::G8, 0.5, 0.4), row(Neighborhood::G4, 0.9, 0.7)};
  EXPECT_EQ(knn_classify(t, {0.9, 0.7}, 3).system, Neighborhood::G8);
  // 1:1 tie goes to G4
  t.rows.push_back(row(Neighborhood::G4, 0.0, 0.0));
  EXPECT_EQ(knn_classify(t, {0.5, 0.4}, 4).system, Neighborhood::G4);
}

TEST(Knn, EmptyTableAndBadK) {
  ReferenceTable t;
  EXPECT_THROW(knn_classify(t, {0.0, 0.0}, 1), std::invalid_argument);
  t.rows = {row(Neighborhood::G4, 0.1, 0.2)};
  EXPECT_THROW(knn_classify(t, {0.0, 0.0}, 2), std::invalid_argument);
  EXPECT_THROW(knn_classify(t, {0.0, 0.0}, 0), std::invalid_argument);
}

TEST(Knn, DuplicatedTableDoubledK) {
  const auto t = small_table(150, 3);
  ReferenceTable d = t;
  d.rows.insert(d.rows.end(), t.rows.begin(), t.rows.end());
  Rng rng(4);
  for (int q = 0; q < 30; ++q) {
    const Summary s{rng.uniform(0.5, 1.0), rng.uniform(0.4, 1.0)};
    for (std::size_t k : {1, 5, 11}) EXPECT_EQ(knn_classify(t, s, k), knn_classify(d, s, 2 * k));
  }
}

TEST(Knn, AffineRescaleInvariant) {
  const auto t = small_table(150, 4);
  ReferenceTable r = t;
  for (auto& row : r.rows) row.summary = {3.0 * row.summary[0] - 7.0, 0.25 * row.summary[1] + 2.0};
  Rng rng(5);
  for (int q = 0; q < 30; ++q) {
    const Summary s{rng.uniform(0.5, 1.0), rng.uniform(0.4, 1.0)};
    const Summary sr{3.0 * s[0] - 7.0, 0.25 * s[1] + 2.0};
    EXPECT_EQ(knn_classify(t, s, 9), knn_classify(r, sr, 9));
  }
}

TEST(PriorErrorRate, NegativeControlShuffledLabels) {
  auto train = small_table(400, 10);
  const auto test = small_table(400, 11);
  Rng rng(12);
  std::vector<CandidateModel> labels;
  for (const auto& r : train.rows) labels.push_back(r.model);
  std::shuffle(labels.begin(), labels.end(), rng.engine());
  for (std::size_t i = 0; i < labels.size(); ++i) train.rows[i].model = labels[i];
  EXPECT_NEAR(prior_error_rate(train, test, 20), 0.5, 3 * std::sqrt(0.25 / 400));
}

TEST(PriorErrorRate, SeparatedPriorsLowNoise) {
  const GraphPriors priors{{0.8, 1.0}, {0.0, 0.1}};
  const auto phi = EmissionParams::integer_means(2, 0.01);
  const auto train = small_table(300, 20, priors, phi);
  const auto test = small_table(100, 21, priors, phi);
  const double e = prior_error_rate(train, test, 15);
  EXPECT_GE(e, 0.0);
  EXPECT_LT(e, 0.1);
  ReferenceTable empty;
  EXPECT_THROW(prior_error_rate(train, empty, 15), std::invalid_argument);
}

TEST(TableCsv, RoundTrip) {
  const auto t = small_table(30, 6);
  std::stringstream ss;
  write_table_csv(ss, t);
  EXPECT_EQ(ss.str().substr(0, 19), "model,psi,s_g4,s_g8");
  const auto back = read_table_csv(ss);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].model, t.rows[i].model);
    EXPECT_EQ(back.rows[i].psi, t.rows[i].psi);
    EXPECT_EQ(back.rows[i].summary, t.rows[i].summary);
  }
}

TEST(TableCsv, BadInput) {
  std::stringstream bad_header("a,b\n");
  EXPECT_ANY_THROW(read_table_csv(bad_header));
  std::stringstream bad_row("model,psi,s_g4,s_g8\nG5,0.1,0.2,0.3\n");
  EXPECT_ANY_THROW(read_table_csv(bad_row));
}

}  // namespace
}  // namespace blic
