#pragma once

#include <span>
#include <vector>

#include "blic/rng.hpp"

namespace blic {

struct GaussianComponent {
  double mean = 0.0;
  double sd = 1.0;

  bool operator==(const GaussianComponent&) const = default;
};

/// Per-color Gaussian emission parameters, kept sorted by mean.
class EmissionParams {
 public:
  EmissionParams() = default;
  /// Throws std::invalid_argument unless there are at least two components,
  /// every sd is positive and means are ascending.
  explicit EmissionParams(std::vector<GaussianComponent> components);

  /// Means 0..K-1 and a common standard deviation.
  static EmissionParams integer_means(int num_colors, double sd);

  int num_colors() const { return static_cast<int>(components_.size()); }
  const GaussianComponent& operator[](int k) const { return components_[k]; }
  const std::vector<GaussianComponent>& components() const { return components_; }

  bool operator==(const EmissionParams&) const = default;

 private:
  std::vector<GaussianComponent> components_;
};

/// theta = (phi, psi) of a hidden Potts model.
struct HiddenPottsParams {
  EmissionParams emission;
  double psi = 0.0;

  int num_colors() const { return emission.num_colors(); }
  bool operator==(const HiddenPottsParams&) const = default;
};

double log_normal_density(double y, double mean, double sd);

inline double log_emission(double y, int k, const EmissionParams& phi) {
  return log_normal_density(y, phi[k].mean, phi[k].sd);
}

/// Per-site argmax of the emission density; ties go to the smaller color.
std::vector<int> marginal_map(std::span<const double> y, const EmissionParams& phi);

/// Probability that the marginal MAP rule mislabels a site whose color is
/// uniform over the K classes. Requires a common standard deviation.
double marginal_map_error(const EmissionParams& phi);

/// Independent y_i ~ N(mean[x_i], sd[x_i]^2).
std::vector<double> sample_emission(std::span<const int> x, const EmissionParams& phi, Rng& rng);

double standard_normal_cdf(double z);

}  // namespace blic
