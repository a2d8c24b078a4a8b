#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "blic/samplers.hpp"

namespace blic {
namespace {

std::size_t encode(const std::vector<int>& x, int K) {
  std::size_t code = 0, scale = 1;
  for (int v : x) {
    code += v * scale;
    scale *= K;
  }
  return code;
}

// Batch-means estimate of E[S] and its standard error. Unit gate is 4 s.e.;
// the acceptance suite runs the 3 s.e. check.
struct MeanEstimate {
  double mean;
  double se;
};

template <class Step>
MeanEstimate estimate_statistic(const PottsSpec& spec, std::size_t samples, Step step, std::uint64_t seed) {
  ChainState st{std::vector<int>(spec.lattice.size(), 0), 0, Rng(seed)};
  for (int i = 0; i < 200; ++i) step(st);
  const std::size_t batches = 50, per = samples / batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t t = 0; t < per; ++t) {
      step(st);
      s += sufficient_statistic(st.field, spec.lattice, spec.system, spec.num_colors);
    }
    means.push_back(s / per);
  }
  double m = 0.0;
  for (double v : means) m += v;
  m /= batches;
  double var = 0.0;
  for (double v : means) var += (v - m) * (v - m);
  var /= batches - 1;
  return {m, std::sqrt(var / batches)};
}

TEST(Gibbs, MatchesEnumeratedMeanStatistic) {
  for (Neighborhood g : {Neighborhood::G4, Neighborhood::G8}) {
    const PottsSpec spec{Lattice(3, 3), g, 2, 0.7};
    const double exact = oracle::statistic_moments({3, 3, g == Neighborhood::G8}, 2, 0.7).mean;
    const auto est = estimate_statistic(spec, 50000, [&](ChainState& s) { gibbs_sweep(s, spec); }, 12);
    EXPECT_LT(std::abs(est.mean - exact), 4 * est.se) << est.mean << " vs " << exact;
  }
}

TEST(SwendsenWang, MatchesEnumeratedMeanStatistic) {
  for (Neighborhood g : {Neighborhood::G4, Neighborhood::G8}) {
    const PottsSpec spec{Lattice(3, 3), g, 2, 0.7};
    const double exact = oracle::statistic_moments({3, 3, g == Neighborhood::G8}, 2, 0.7).mean;
    const auto est =
        estimate_statistic(spec, 50000, [&](ChainState& s) { swendsen_wang_step(s, spec); }, 13);
    EXPECT_LT(std::abs(est.mean - exact), 4 * est.se) << est.mean << " vs " << exact;
  }
}

TEST(SwendsenWang, StateDistributionTv) {
  const PottsSpec spec{Lattice(3, 3), Neighborhood::G4, 2, 0.7};
  const auto p = oracle::state_probabilities({3, 3, false}, 2, 0.7);
  ChainState st{std::vector<int>(9, 0), 0, Rng(8)};
  std::vector<double> counts(p.size(), 0.0);
  const std::size_t n = 200000;
  for (std::size_t t = 0; t < n; ++t) {
    swendsen_wang_step(st, spec);
    counts[encode(st.field, 2)] += 1;
  }
  double tv = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) tv += std::abs(counts[s] / n - p[s]);
  EXPECT_LT(0.5 * tv, 0.03);
}

TEST(Gibbs, PosteriorWithEvidence) {
  // 2x2, K=2, random potentials: compare to enumerated posterior
  const PottsSpec spec{Lattice(2, 2), Neighborhood::G4, 2, 0.8};
  SitePotentials pot(4, 2);
  const double g[4][2] = {{0.3, -0.2}, {-1.0, 0.5}, {0.0, 0.0}, {0.7, -0.4}};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 2; ++k) pot(i, k) = g[i][k];
  std::vector<double> w;
  oracle::for_each_state(4, 2, [&](const auto& x) {
    double e = 0.8 * oracle::matches({2, 2, false}, x);
    for (int i = 0; i < 4; ++i) e += g[i][x[i]];
    w.push_back(e);
  });
  const double lz = oracle::log_sum_exp(w);
  ChainState st{std::vector<int>(4, 0), 0, Rng(31)};
  std::vector<double> counts(16, 0.0);
  const std::size_t n = 200000;
  for (std::size_t t = 0; t < n; ++t) {
    gibbs_sweep(st, spec, &pot);
    counts[encode(st.field, 2)] += 1;
  }
  double tv = 0.0;
  for (int s = 0; s < 16; ++s) tv += std::abs(counts[s] / n - std::exp(w[s] - lz));
  EXPECT_LT(0.5 * tv, 0.01);
}

TEST(Gibbs, PsiZeroIsUniform) {
  const PottsSpec spec{Lattice(30, 30), Neighborhood::G8, 3, 0.0};
  ChainState st{std::vector<int>(900, 0), 0, Rng(2)};
  std::vector<double> counts(3, 0.0);
  for (int t = 0; t < 20; ++t) {
    gibbs_sweep(st, spec);
    for (int v : st.field) counts[v] += 1;
  }
  for (double c : counts) EXPECT_NEAR(c / 18000, 1.0 / 3, 4 * std::sqrt(2.0 / 9 / 18000));
  EXPECT_EQ(st.sweep_count, 20u);
}

TEST(SwendsenWang, LargePsiFreezes) {
  const PottsSpec spec{Lattice(8, 8), Neighborhood::G4, 4, 50.0};
  Rng rng(6);
  ChainState st{uniform_field(64, 4, rng), 0, Rng(7)};
  for (int t = 0; t < 100; ++t) swendsen_wang_step(st, spec);
  for (int v : st.field) EXPECT_EQ(v, st.field[0]);
}

TEST(SwendsenWang, RejectsNegativePsi) {
  const PottsSpec spec{Lattice(3, 3), Neighborhood::G4, 2, -0.1};
  ChainState st{std::vector<int>(9, 0), 0, Rng(1)};
  EXPECT_THROW(swendsen_wang_step(st, spec), std::invalid_argument);
}

TEST(SimulateHidden, Deterministic) {
  const PottsSpec spec{Lattice(16, 16), Neighborhood::G8, 3, 0.5};
  const auto phi = EmissionParams::integer_means(3, 0.5);
  Rng a(99), b(99);
  const auto s1 = simulate_hidden(spec, phi, 20, a);
  const auto s2 = simulate_hidden(spec, phi, 20, b);
  EXPECT_EQ(s1.x, s2.x);
  EXPECT_EQ(s1.y, s2.y);
}

TEST(SimulateHidden, PsiZeroUniformColors) {
  const PottsSpec spec{Lattice(60, 60), Neighborhood::G4, 4, 0.0};
  Rng rng(5);
  const auto s = simulate_hidden(spec, EmissionParams::integer_means(4, 0.5), 10, rng);
  std::vector<double> counts(4, 0.0);
  for (int v : s.x) counts[v] += 1;
  const double n = 3600, se = std::sqrt(0.25 * 0.75 / n);
  for (double c : counts) EXPECT_NEAR(c / n, 0.25, 4 * se);
}

TEST(SimulateHidden, OrderedAboveBaseline) {
  const PottsSpec spec{Lattice(100, 100), Neighborhood::G4, 4, 1.0};
  Rng rng(3);
  const auto s = simulate_hidden(spec, EmissionParams::integer_means(4, 0.5), 500, rng);
  const double frac = static_cast<double>(sufficient_statistic(s.x, spec.lattice, spec.system, 4)) /
                      edge_count(spec.lattice, spec.system);
  EXPECT_GT(frac, 0.25 + 0.1);
}

}  // namespace
}  // namespace blic
