#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "blic/fit.hpp"
#include "blic/grid.hpp"
#include "blic/noise.hpp"

namespace blic {

/// One hidden Potts candidate: graph and number of colors.
struct CandidateModel {
  Neighborhood system = Neighborhood::G4;
  int num_colors = 2;

  bool operator==(const CandidateModel&) const = default;
};

struct CriterionValue {
  CandidateModel model;
  std::string name;
  double value = 0.0;
  int free_parameters = 0;
  double block_loglik = 0.0;
  HiddenPottsParams theta;
};

/// K means, K standard deviations and psi.
constexpr int free_parameters(int num_colors) { return 2 * num_colors + 1; }

/// Block approximation of log pi(y | theta): the sum over blocks of
/// log Z(theta, y_A, x_B) - log Z(psi, x_B), borders taken from `reference`
/// when the partition fixes them. `reference` must be given exactly when
/// the partition's border mode is FixedField.
double block_incomplete_loglik(std::span<const double> y, const BlockPartition& partition,
                               const std::vector<int>* reference, const HiddenPottsParams& theta,
                               const CandidateModel& model);

/// Criterion name for b x b blocks: "BLIC_bxb", or "BLIC_MF_bxb" with borders.
std::string blic_name(std::size_t b, bool fixed_border);

/// -2 * block_incomplete_loglik + (2K+1) log n over b x b blocks. A
/// reference field switches borders on.
CriterionValue blic(std::span<const double> y, const Lattice& lattice, std::size_t b,
                    const HiddenPottsParams& theta, const CandidateModel& model,
                    const std::vector<int>* reference = nullptr);

/// 1 x 1 blocks with borders and parameters from an ICM fit.
CriterionValue plic(std::span<const double> y, const Lattice& lattice,
                    const CandidateModel& model, const FitResult& icm);

/// 1 x 1 blocks with borders and parameters from a simulated-field EM fit.
CriterionValue bic_mf_like(std::span<const double> y, const Lattice& lattice,
                           const CandidateModel& model, const FitResult& em);

/// Differences value(K+1) - value(K) over a contiguous K range of one
/// criterion on one graph, ordered by K.
std::vector<double> delta_curve(std::span<const CriterionValue> values);

/// Smallest value; ties go to the smaller K, then G4.
CandidateModel select_model(std::span<const CriterionValue> values);

}  // namespace blic
