#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "blic/grid.hpp"

namespace blic {

/// K-color Potts model on a lattice: pi(x) proportional to exp(psi * S(x)),
/// where S(x) counts monochromatic edges. Only scalar psi is supported.
struct PottsSpec {
  Lattice lattice;
  Neighborhood system = Neighborhood::G4;
  int num_colors = 2;
  double psi = 0.0;

  void validate() const;
};

/// Log-scale singleton potentials g_i(k) over every site of a lattice.
class SitePotentials {
 public:
  SitePotentials(std::size_t num_sites, int num_colors, double fill = 0.0);

  std::size_t num_sites() const { return num_sites_; }
  int num_colors() const { return num_colors_; }

  double operator()(Site i, int k) const { return table_[i * num_colors_ + k]; }
  double& operator()(Site i, int k) { return table_[i * num_colors_ + k]; }

  std::span<const double> row(Site i) const {
    return {table_.data() + i * num_colors_, static_cast<std::size_t>(num_colors_)};
  }

 private:
  std::size_t num_sites_;
  int num_colors_;
  std::vector<double> table_;
};

/// Fixed colors on the border sites of one block.
class BorderCondition {
 public:
  BorderCondition() = default;
  /// Entries are (site, color); sorted on construction.
  explicit BorderCondition(std::vector<std::pair<Site, int>> values);

  /// Restriction of a full-lattice field to the border of `block`.
  static BorderCondition from_field(const Lattice& lattice, const Block& block,
                                    Neighborhood system, std::span<const int> field);

  const std::vector<std::pair<Site, int>>& values() const { return values_; }
  bool empty() const { return values_.empty(); }
  /// Color at site j, or -1 when j is not part of the border.
  int color_at(Site j) const;

 private:
  std::vector<std::pair<Site, int>> values_;
};

/// Number of monochromatic edges of the whole field.
std::size_t sufficient_statistic(std::span<const int> field, const Lattice& lattice,
                                 Neighborhood system, int num_colors);

/// Monochromatic edges inside `block` plus matches between block sites and
/// border colors. `block_colors` is block-local, row-major. A null or empty
/// border counts internal edges only.
std::size_t conditioned_statistic(std::span<const int> block_colors, const Lattice& lattice,
                                  const Block& block, Neighborhood system, int num_colors,
                                  const BorderCondition* border = nullptr);

/// Largest configuration count the enumeration oracle accepts (2^25).
inline constexpr double kMaxEnumerationLog2 = 25.0;
/// Largest forward message the recursion accepts (2^22 entries).
inline constexpr double kMaxMessageLog2 = 22.0;

/// log of sum over block configurations of exp(psi*S(x|border) + sum_i g_i(x_i))
/// by exhaustive enumeration. A null block means the whole lattice. Throws
/// std::length_error beyond the enumeration bound.
double log_partition_bruteforce(const PottsSpec& spec, const Block* block = nullptr,
                                const SitePotentials* potentials = nullptr,
                                const BorderCondition* border = nullptr);

/// Same quantity as log_partition_bruteforce, via a forward recursion that
/// eliminates sites one at a time along the longer block axis and keeps a
/// message over the colors of the last r sites (r = short side for G4, short
/// side + 1 for G8). Cost O(|block| K^(r+1)). Throws std::length_error when
/// K^r exceeds the message bound.
double log_partition_recursive(const PottsSpec& spec, const Block& block,
                               const SitePotentials* potentials = nullptr,
                               const BorderCondition* border = nullptr);

/// Message length r the recursion uses for a block.
std::size_t recursion_lag(const Block& block, Neighborhood system);

/// Whether log_partition_recursive accepts a block of this shape for K colors.
bool recursion_feasible(const Block& block, Neighborhood system, int num_colors);

}  // namespace blic
