#include "blic/samplers.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace blic {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // The smaller root wins so labels do not depend on union order.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

 private:
  std::vector<std::size_t> parent_;
};

void check_state(const ChainState& state, const PottsSpec& spec) {
  if (state.field.size() != spec.lattice.size()) {
    throw std::invalid_argument("chain field does not match the lattice");
  }
}

}  // namespace

std::vector<int> uniform_field(std::size_t num_sites, int num_colors, Rng& rng) {
  std::vector<int> x(num_sites);
  for (auto& v : x) v = rng.uniform_int(num_colors);
  return x;
}

void gibbs_sweep(ChainState& state, const PottsSpec& spec, const SitePotentials* potentials) {
  gibbs_sweep(state, spec, Adjacency(spec.lattice, spec.system), potentials);
}

void gibbs_sweep(ChainState& state, const PottsSpec& spec, const Adjacency& adjacency,
                 const SitePotentials* potentials) {
  spec.validate();
  check_state(state, spec);
  const int K = spec.num_colors;
  std::vector<double> logp(K);
  std::vector<int> same(K);
  auto& x = state.field;
  for (Site i = 0; i < x.size(); ++i) {
    std::fill(same.begin(), same.end(), 0);
    for (const Site* j = adjacency.begin(i); j != adjacency.end(i); ++j) ++same[x[*j]];
    double best = -INFINITY;
    for (int k = 0; k < K; ++k) {
      logp[k] = spec.psi * same[k] + (potentials != nullptr ? (*potentials)(i, k) : 0.0);
      best = std::max(best, logp[k]);
    }
    double total = 0.0;
    for (int k = 0; k < K; ++k) total += (logp[k] = std::exp(logp[k] - best));
    double u = state.rng.uniform() * total;
    int k = 0;
    while (k + 1 < K && u >= logp[k]) u -= logp[k++];
    x[i] = k;
  }
  ++state.sweep_count;
}

void swendsen_wang_step(ChainState& state, const PottsSpec& spec) {
  swendsen_wang_step(state, spec, edges(spec.lattice, spec.system));
}

void swendsen_wang_step(ChainState& state, const PottsSpec& spec,
                        const std::vector<std::pair<Site, Site>>& edge_list) {
  spec.validate();
  check_state(state, spec);
  if (spec.psi < 0.0) throw std::invalid_argument("Swendsen-Wang needs psi >= 0");
  const double p_bond = -std::expm1(-spec.psi);
  auto& x = state.field;
  DisjointSets clusters(x.size());
  if (p_bond > 0.0) {
    for (const auto& [i, j] : edge_list) {
      if (x[i] == x[j] && state.rng.uniform() < p_bond) clusters.unite(i, j);
    }
  }
  // Roots are the smallest site of each cluster, so a raster pass meets
  // every root before its members.
  std::vector<int> color(x.size(), -1);
  for (Site i = 0; i < x.size(); ++i) {
    const std::size_t root = clusters.find(i);
    if (color[root] < 0) color[root] = state.rng.uniform_int(spec.num_colors);
    x[i] = color[root];
  }
  ++state.sweep_count;
}

HiddenSample simulate_hidden(const PottsSpec& spec, const EmissionParams& phi,
                             std::size_t burnin, Rng& rng) {
  if (burnin == 0) throw std::invalid_argument("burn-in must be at least one step");
  if (phi.num_colors() != spec.num_colors) {
    throw std::invalid_argument("emission and Potts model disagree on the number of colors");
  }
  ChainState state{uniform_field(spec.lattice.size(), spec.num_colors, rng), 0, rng.split(1)};
  const auto edge_list = edges(spec.lattice, spec.system);
  for (std::size_t s = 0; s < burnin; ++s) swendsen_wang_step(state, spec, edge_list);
  Rng noise = rng.split(2);
  HiddenSample out;
  out.y = sample_emission(state.field, phi, noise);
  out.x = std::move(state.field);
  return out;
}

}  // namespace blic
