#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "blic/noise.hpp"
#include "blic/potts.hpp"
#include "blic/rng.hpp"

namespace blic {

struct ChainState {
  std::vector<int> field;
  std::size_t sweep_count = 0;
  Rng rng;
};

/// Field with i.i.d. uniform colors.
std::vector<int> uniform_field(std::size_t num_sites, int num_colors, Rng& rng);

/// One raster-order pass redrawing every site from its full conditional
/// proportional to exp(psi * #{same-colored neighbors} + g_i(k)).
void gibbs_sweep(ChainState& state, const PottsSpec& spec,
                 const SitePotentials* potentials = nullptr);
void gibbs_sweep(ChainState& state, const PottsSpec& spec, const Adjacency& adjacency,
                 const SitePotentials* potentials = nullptr);

/// One Swendsen-Wang update: open each monochromatic edge with probability
/// 1 - exp(-psi), then recolor every connected cluster uniformly. Throws for
/// negative psi.
void swendsen_wang_step(ChainState& state, const PottsSpec& spec);
void swendsen_wang_step(ChainState& state, const PottsSpec& spec,
                        const std::vector<std::pair<Site, Site>>& edge_list);

struct HiddenSample {
  std::vector<int> x;
  std::vector<double> y;
};

/// Prior draw by Swendsen-Wang from a uniform start after `burnin` steps,
/// then Gaussian emission.
HiddenSample simulate_hidden(const PottsSpec& spec, const EmissionParams& phi,
                             std::size_t burnin, Rng& rng);

}  // namespace blic
