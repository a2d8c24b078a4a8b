#include "blic/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blic {

EmissionParams::EmissionParams(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  if (components_.size() < 2) throw std::invalid_argument("emission needs at least two colors");
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (!(components_[k].sd > 0.0) || !std::isfinite(components_[k].sd) ||
        !std::isfinite(components_[k].mean)) {
      throw std::invalid_argument("emission standard deviations must be positive and finite");
    }
    if (k > 0 && components_[k].mean < components_[k - 1].mean) {
      throw std::invalid_argument("emission means must be sorted ascending");
    }
  }
}

EmissionParams EmissionParams::integer_means(int num_colors, double sd) {
  std::vector<GaussianComponent> c;
  for (int k = 0; k < num_colors; ++k) c.push_back({static_cast<double>(k), sd});
  return EmissionParams(std::move(c));
}

double log_normal_density(double y, double mean, double sd) {
  const double z = (y - mean) / sd;
  return -0.5 * std::log(2.0 * std::numbers::pi * sd * sd) - 0.5 * z * z;
}

std::vector<int> marginal_map(std::span<const double> y, const EmissionParams& phi) {
  std::vector<int> out(y.size(), 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    double best = log_emission(y[i], 0, phi);
    for (int k = 1; k < phi.num_colors(); ++k) {
      const double v = log_emission(y[i], k, phi);
      if (v > best) {
        best = v;
        out[i] = k;
      }
    }
  }
  return out;
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double marginal_map_error(const EmissionParams& phi) {
  const int K = phi.num_colors();
  const double sd = phi[0].sd;
  for (int k = 1; k < K; ++k) {
    if (phi[k].sd != sd) throw std::invalid_argument("marginal_map_error needs a common sd");
  }
  // With a common sd the decision regions are split at midpoints.
  double correct = 0.0;
  for (int k = 0; k < K; ++k) {
    const double lo = k == 0 ? -INFINITY : 0.5 * (phi[k - 1].mean + phi[k].mean);
    const double hi = k == K - 1 ? INFINITY : 0.5 * (phi[k].mean + phi[k + 1].mean);
    const double mu = phi[k].mean;
    correct += standard_normal_cdf((hi - mu) / sd) - standard_normal_cdf((lo - mu) / sd);
  }
  return 1.0 - correct / K;
}

std::vector<double> sample_emission(std::span<const int> x, const EmissionParams& phi, Rng& rng) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] >= phi.num_colors()) throw std::invalid_argument("color out of range");
    y[i] = phi[x[i]].mean + phi[x[i]].sd * rng.normal();
  }
  return y;
}

}  // namespace blic
