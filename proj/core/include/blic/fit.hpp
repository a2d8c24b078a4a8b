#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "blic/grid.hpp"
#include "blic/noise.hpp"
#include "blic/potts.hpp"
#include "blic/rng.hpp"

namespace blic {

/// The model structure a fit works on: lattice, graph and number of colors.
struct FitSkeleton {
  Lattice lattice;
  Neighborhood system = Neighborhood::G4;
  int num_colors = 2;

  PottsSpec potts(double psi) const { return {lattice, system, num_colors, psi}; }
};

enum class FitMethod { ICM, SimulatedField };

struct FitResult {
  HiddenPottsParams theta;
  std::vector<int> segmentation;
  std::size_t iterations = 0;
  FitMethod method = FitMethod::ICM;
  /// SimulatedField only: surrogate objective gain of each M-step.
  std::vector<double> mstep_gain;
};

inline constexpr double kMinSd = 1e-3;
inline constexpr double kPsiLower = 0.0;
inline constexpr double kPsiUpper = 3.0;

struct KMeansResult {
  std::vector<int> labels;
  EmissionParams emission;
  std::size_t iterations = 0;
};

/// Lloyd's algorithm on scalar data from quantile starting centers, at most
/// 50 iterations; clusters are relabeled by ascending center and each sd is
/// the within-cluster standard deviation floored at kMinSd. Throws
/// std::invalid_argument when there are fewer than K distinct values.
KMeansResult kmeans_init(std::span<const double> y, int num_colors);

/// Labels and parameters an iterative fit starts from.
struct FitInit {
  std::vector<int> labels;
  HiddenPottsParams theta;
};

/// K-means labels and emission, psi from the pseudolikelihood of the labels.
FitInit initial_fit(std::span<const double> y, const FitSkeleton& skeleton);

struct FitOptions {
  std::size_t iterations = 200;
  /// ICM only: cap on raster sweeps per outer iteration.
  std::size_t max_sweeps = 10;
  double psi_lower = kPsiLower;
  double psi_upper = kPsiUpper;
  /// Hold psi at this value instead of estimating it.
  std::optional<double> fixed_psi;
};

/// Unsupervised iterated conditional modes: greedy raster sweeps to a fixed
/// point, then emission from the hard assignment and psi by maximum
/// pseudolikelihood, repeated for options.iterations rounds.
FitResult icm_fit(std::span<const double> y, const FitSkeleton& skeleton, const FitInit& init,
                  const FitOptions& options = {});

/// Simulated-field EM. Each iteration draws a field by one posterior Gibbs
/// sweep, computes responsibilities with neighbors fixed to that field and
/// re-estimates means, sds and psi. Returns the last parameters and the last
/// drawn field.
FitResult simulated_field_em(std::span<const double> y, const FitSkeleton& skeleton,
                             const FitInit& init, Rng& rng, const FitOptions& options = {});

/// v_ik = number of neighbors of i colored k, flattened n x K.
std::vector<int> neighbor_color_counts(std::span<const int> field, const Adjacency& adjacency,
                                       int num_colors);

/// sum_i sum_k t_ik [psi v_ik - log sum_k' exp(psi v_ik')]; also reports the
/// first and second derivatives in psi.
struct PsiObjective {
  double value = 0.0;
  double gradient = 0.0;
  double curvature = 0.0;
};
PsiObjective psi_objective(double psi, std::span<const double> weights,
                           std::span<const int> counts, int num_colors);

/// Maximizer of psi_objective over [lower, upper] (the objective is concave).
double maximize_psi(std::span<const double> weights, std::span<const int> counts, int num_colors,
                    double lower = kPsiLower, double upper = kPsiUpper);

/// EM surrogate sum_i sum_k t_ik [log N(y_i; mu_k, sd_k) + psi v_ik - log sum_k' exp(psi v_ik')].
double em_surrogate(std::span<const double> y, std::span<const double> weights,
                    std::span<const int> counts, const HiddenPottsParams& theta);

}  // namespace blic
