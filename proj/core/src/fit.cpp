#include "blic/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "blic/samplers.hpp"

namespace blic {

namespace {

constexpr std::size_t kMaxLloydIterations = 50;
constexpr double kMinWeight = 1e-8;

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

int nearest_center(double v, const std::vector<double>& centers) {
  int best = 0;
  double best_d = std::abs(v - centers[0]);
  for (int k = 1; k < static_cast<int>(centers.size()); ++k) {
    const double d = std::abs(v - centers[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

void check_input(std::span<const double> y, const FitSkeleton& skeleton) {
  if (y.size() != skeleton.lattice.size()) {
    throw std::invalid_argument("observation does not match the lattice");
  }
  if (skeleton.num_colors < 2) throw std::invalid_argument("a fit needs at least two colors");
}

// Sorts components by mean and relabels the field to match.
void canonicalize(std::vector<GaussianComponent>& comps, std::vector<int>& field) {
  const int K = static_cast<int>(comps.size());
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return comps[a].mean < comps[b].mean; });
  std::vector<int> new_label(K);
  std::vector<GaussianComponent> sorted(K);
  for (int r = 0; r < K; ++r) {
    new_label[order[r]] = r;
    sorted[r] = comps[order[r]];
  }
  comps.swap(sorted);
  for (int& v : field) v = new_label[v];
}

double floored_sd(double variance) { return std::max(std::sqrt(std::max(variance, 0.0)), kMinSd); }

// Weighted emission estimate; components with no weight are reseeded at the
// data quantile (k + 0.5) / K.
std::vector<GaussianComponent> weighted_emission(std::span<const double> y,
                                                 std::span<const double> weights, int K,
                                                 const std::vector<double>& sorted_y) {
  std::vector<double> w(K, 0.0), s1(K, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (int k = 0; k < K; ++k) {
      w[k] += weights[i * K + k];
      s1[k] += weights[i * K + k] * y[i];
    }
  }
  std::vector<GaussianComponent> comps(K);
  for (int k = 0; k < K; ++k) comps[k].mean = w[k] > kMinWeight ? s1[k] / w[k] : 0.0;
  std::vector<double> s2(K, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (int k = 0; k < K; ++k) {
      const double d = y[i] - comps[k].mean;
      s2[k] += weights[i * K + k] * d * d;
    }
  }
  double spread = 0.0;
  {
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    for (double v : y) spread += (v - mean) * (v - mean);
    spread = std::sqrt(spread / static_cast<double>(y.size())) / K;
  }
  for (int k = 0; k < K; ++k) {
    if (w[k] > kMinWeight) {
      comps[k].sd = floored_sd(s2[k] / w[k]);
    } else {
      comps[k].mean = quantile(sorted_y, (k + 0.5) / K);
      comps[k].sd = std::max(spread, kMinSd);
    }
  }
  return comps;
}

std::vector<double> hard_weights(std::span<const int> field, int K) {
  std::vector<double> t(field.size() * K, 0.0);
  for (std::size_t i = 0; i < field.size(); ++i) t[i * K + field[i]] = 1.0;
  return t;
}

SitePotentials emission_potentials(std::span<const double> y, const EmissionParams& phi) {
  SitePotentials g(y.size(), phi.num_colors());
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (int k = 0; k < phi.num_colors(); ++k) g(i, k) = log_emission(y[i], k, phi);
  }
  return g;
}

}  // namespace

KMeansResult kmeans_init(std::span<const double> y, int num_colors) {
  if (num_colors < 2) throw std::invalid_argument("k-means needs K >= 2");
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  const auto distinct = static_cast<std::size_t>(
      std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  if (distinct < static_cast<std::size_t>(num_colors)) {
    throw std::invalid_argument("k-means needs at least K distinct values");
  }
  sorted.assign(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());

  const int K = num_colors;
  std::vector<double> centers(K);
  for (int k = 0; k < K; ++k) centers[k] = quantile(sorted, (k + 0.5) / K);

  // Lloyd iterations on the sorted values so the result is order-free.
  std::vector<int> assign(sorted.size(), -1);
  std::size_t it = 0;
  for (; it < kMaxLloydIterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const int k = nearest_center(sorted[i], centers);
      changed |= k != assign[i];
      assign[i] = k;
    }
    if (!changed) break;
    std::vector<double> sum(K, 0.0);
    std::vector<std::size_t> count(K, 0);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      sum[assign[i]] += sorted[i];
      ++count[assign[i]];
    }
    for (int k = 0; k < K; ++k) {
      if (count[k] > 0) {
        centers[k] = sum[k] / static_cast<double>(count[k]);
        continue;
      }
      // Empty cluster: move it to the worst-fitting point.
      std::size_t worst = 0;
      double worst_d = -1.0;
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double d = std::abs(sorted[i] - centers[assign[i]]);
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      centers[k] = sorted[worst];
    }
    std::sort(centers.begin(), centers.end());
  }

  KMeansResult out;
  out.iterations = it;
  out.labels.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out.labels[i] = nearest_center(y[i], centers);
  std::vector<GaussianComponent> comps(K);
  std::vector<double> s2(K, 0.0);
  std::vector<std::size_t> count(K, 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - centers[out.labels[i]];
    s2[out.labels[i]] += d * d;
    ++count[out.labels[i]];
  }
  for (int k = 0; k < K; ++k) {
    comps[k].mean = centers[k];
    comps[k].sd = count[k] > 0 ? floored_sd(s2[k] / static_cast<double>(count[k])) : kMinSd;
  }
  out.emission = EmissionParams(std::move(comps));
  return out;
}

std::vector<int> neighbor_color_counts(std::span<const int> field, const Adjacency& adjacency,
                                       int num_colors) {
  std::vector<int> v(field.size() * num_colors, 0);
  for (Site i = 0; i < field.size(); ++i) {
    for (const Site* j = adjacency.begin(i); j != adjacency.end(i); ++j) {
      ++v[i * num_colors + field[*j]];
    }
  }
  return v;
}

PsiObjective psi_objective(double psi, std::span<const double> weights,
                           std::span<const int> counts, int num_colors) {
  const int K = num_colors;
  // Neighbor counts are small integers, so exp(psi v) comes from a table.
  const int max_count = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  std::vector<double> power(max_count + 1);
  for (int v = 0; v <= max_count; ++v) power[v] = std::exp(psi * v);
  PsiObjective out;
  const std::size_t n = counts.size() / K;
  for (std::size_t i = 0; i < n; ++i) {
    const int* v = counts.data() + i * K;
    const double* t = weights.data() + i * K;
    double z = 0.0, m1 = 0.0, m2 = 0.0, tw = 0.0, tv = 0.0;
    for (int k = 0; k < K; ++k) {
      const double e = power[v[k]];
      z += e;
      m1 += e * v[k];
      m2 += e * v[k] * v[k];
      tw += t[k];
      tv += t[k] * v[k];
    }
    const double mean = m1 / z;
    out.value += psi * tv - tw * std::log(z);
    out.gradient += tv - tw * mean;
    out.curvature -= tw * (m2 / z - mean * mean);
  }
  return out;
}

double maximize_psi(std::span<const double> weights, std::span<const int> counts, int num_colors,
                    double lower, double upper) {
  if (psi_objective(lower, weights, counts, num_colors).gradient <= 0.0) return lower;
  if (psi_objective(upper, weights, counts, num_colors).gradient >= 0.0) return upper;
  // Safeguarded Newton inside a bracket where the gradient changes sign.
  double a = lower, b = upper;
  double psi = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const PsiObjective f = psi_objective(psi, weights, counts, num_colors);
    if (f.gradient > 0.0) {
      a = psi;
    } else {
      b = psi;
    }
    double next = f.curvature < 0.0 ? psi - f.gradient / f.curvature : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - psi) < 1e-12 || b - a < 1e-12) return next;
    psi = next;
  }
  return psi;
}

double em_surrogate(std::span<const double> y, std::span<const double> weights,
                    std::span<const int> counts, const HiddenPottsParams& theta) {
  const int K = theta.num_colors();
  double value = psi_objective(theta.psi, weights, counts, K).value;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (int k = 0; k < K; ++k) {
      const double t = weights[i * K + k];
      if (t > 0.0) value += t * log_emission(y[i], k, theta.emission);
    }
  }
  return value;
}

FitInit initial_fit(std::span<const double> y, const FitSkeleton& skeleton) {
  check_input(y, skeleton);
  KMeansResult km = kmeans_init(y, skeleton.num_colors);
  const Adjacency adjacency(skeleton.lattice, skeleton.system);
  const int K = skeleton.num_colors;
  const double psi = maximize_psi(hard_weights(km.labels, K),
                                  neighbor_color_counts(km.labels, adjacency, K), K);
  return {std::move(km.labels), {std::move(km.emission), psi}};
}

FitResult icm_fit(std::span<const double> y, const FitSkeleton& skeleton, const FitInit& init,
                  const FitOptions& options) {
  check_input(y, skeleton);
  const int K = skeleton.num_colors;
  if (init.labels.size() != y.size() || init.theta.num_colors() != K) {
    throw std::invalid_argument("initial fit does not match the skeleton");
  }
  const Adjacency adjacency(skeleton.lattice, skeleton.system);
  std::vector<double> sorted_y(y.begin(), y.end());
  std::sort(sorted_y.begin(), sorted_y.end());

  FitResult out;
  out.method = FitMethod::ICM;
  out.segmentation = init.labels;
  out.theta = init.theta;
  if (options.fixed_psi) out.theta.psi = *options.fixed_psi;
  auto& x = out.segmentation;
  std::vector<double> score(K);
  std::vector<int> same(K);

  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    const EmissionParams& phi = out.theta.emission;
    const double psi = out.theta.psi;
    for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
      bool changed = false;
      for (Site i = 0; i < x.size(); ++i) {
        std::fill(same.begin(), same.end(), 0);
        for (const Site* j = adjacency.begin(i); j != adjacency.end(i); ++j) ++same[x[*j]];
        int best = 0;
        double best_score = log_emission(y[i], 0, phi) + psi * same[0];
        for (int k = 1; k < K; ++k) {
          const double s = log_emission(y[i], k, phi) + psi * same[k];
          if (s > best_score) {
            best_score = s;
            best = k;
          }
        }
        changed |= best != x[i];
        x[i] = best;
      }
      if (!changed) break;
    }

    const auto t = hard_weights(x, K);
    auto comps = weighted_emission(y, t, K, sorted_y);
    canonicalize(comps, x);
    out.theta.emission = EmissionParams(std::move(comps));
    if (!options.fixed_psi) {
      out.theta.psi = maximize_psi(hard_weights(x, K), neighbor_color_counts(x, adjacency, K), K,
                                   options.psi_lower, options.psi_upper);
    }
    out.iterations = iter + 1;
  }
  return out;
}

FitResult simulated_field_em(std::span<const double> y, const FitSkeleton& skeleton,
                             const FitInit& init, Rng& rng, const FitOptions& options) {
  check_input(y, skeleton);
  const int K = skeleton.num_colors;
  if (init.labels.size() != y.size() || init.theta.num_colors() != K) {
    throw std::invalid_argument("initial fit does not match the skeleton");
  }
  const Adjacency adjacency(skeleton.lattice, skeleton.system);
  std::vector<double> sorted_y(y.begin(), y.end());
  std::sort(sorted_y.begin(), sorted_y.end());

  FitResult out;
  out.method = FitMethod::SimulatedField;
  out.theta = init.theta;
  if (options.fixed_psi) out.theta.psi = *options.fixed_psi;
  ChainState chain{init.labels, 0, rng.split(0)};
  std::vector<double> t(y.size() * K);

  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    const HiddenPottsParams& theta = out.theta;
    const SitePotentials evidence = emission_potentials(y, theta.emission);
    gibbs_sweep(chain, skeleton.potts(theta.psi), adjacency, &evidence);

    // E-step with neighbors fixed to the drawn field.
    const auto v = neighbor_color_counts(chain.field, adjacency, K);
    for (std::size_t i = 0; i < y.size(); ++i) {
      double best = -INFINITY;
      for (int k = 0; k < K; ++k) {
        t[i * K + k] = evidence(i, k) + theta.psi * v[i * K + k];
        best = std::max(best, t[i * K + k]);
      }
      double z = 0.0;
      for (int k = 0; k < K; ++k) z += (t[i * K + k] = std::exp(t[i * K + k] - best));
      for (int k = 0; k < K; ++k) t[i * K + k] /= z;
    }

    // M-step.
    const double before = em_surrogate(y, t, v, theta);
    HiddenPottsParams next;
    auto comps = weighted_emission(y, t, K, sorted_y);
    next.psi = options.fixed_psi ? *options.fixed_psi
                                 : maximize_psi(t, v, K, options.psi_lower, options.psi_upper);
    // Gain is measured before relabeling so weights and components agree.
    double after = psi_objective(next.psi, t, v, K).value;
    for (std::size_t i = 0; i < y.size(); ++i) {
      for (int k = 0; k < K; ++k) {
        const double w = t[i * K + k];
        if (w > 0.0) after += w * log_normal_density(y[i], comps[k].mean, comps[k].sd);
      }
    }
    out.mstep_gain.push_back(after - before);
    canonicalize(comps, chain.field);
    next.emission = EmissionParams(std::move(comps));
    out.theta = std::move(next);
    out.iterations = iter + 1;
  }
  out.segmentation = std::move(chain.field);
  return out;
}

}  // namespace blic
