#include "blic/potts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace blic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp accumulator.
class LogSum {
 public:
  void add(double v) {
    if (v == kNegInf) return;
    if (v <= max_) {
      sum_ += std::exp(v - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    }
  }
  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

// Edges of a block in block-local indices, plus the block-to-border edges.
struct BlockGeometry {
  std::vector<Site> sites;                          // local -> global
  std::vector<std::pair<std::size_t, std::size_t>> internal;
  std::vector<std::pair<std::size_t, Site>> crossing;  // (local, global border site)
};

BlockGeometry block_geometry(const Lattice& lattice, const Block& block, Neighborhood system) {
  BlockGeometry g;
  g.sites = block.sites(lattice);
  auto local_of = [&](Site j) {
    return (lattice.row(j) - block.row0) * block.width + (lattice.col(j) - block.col0);
  };
  for (std::size_t a = 0; a < g.sites.size(); ++a) {
    for (Site j : neighbors(lattice, system, g.sites[a])) {
      if (block.contains(lattice, j)) {
        const std::size_t b = local_of(j);
        if (b > a) g.internal.emplace_back(a, b);
      } else {
        g.crossing.emplace_back(a, j);
      }
    }
  }
  return g;
}

void check_block(const Lattice& lattice, const Block& block) {
  if (block.height == 0 || block.width == 0 || block.row0 + block.height > lattice.height() ||
      block.col0 + block.width > lattice.width()) {
    throw std::invalid_argument("block does not fit in the lattice");
  }
}

void check_colors(std::span<const int> colors, int num_colors) {
  for (int c : colors) {
    if (c < 0 || c >= num_colors) {
      throw std::invalid_argument("color " + std::to_string(c) + " out of range");
    }
  }
}

// A non-empty border must cover exactly the block border with valid colors.
void check_border(const Lattice& lattice, const Block& block, Neighborhood system,
                  int num_colors, const BorderCondition* border) {
  if (border == nullptr || border->empty()) return;
  const auto expected = block_border(lattice, block, system);
  const auto& values = border->values();
  bool same = expected.size() == values.size();
  for (std::size_t i = 0; same && i < values.size(); ++i) same = values[i].first == expected[i];
  if (!same) throw std::invalid_argument("border domain mismatch");
  for (const auto& [site, color] : values) {
    if (color < 0 || color >= num_colors) throw std::invalid_argument("border color out of range");
  }
}

void check_potentials(const PottsSpec& spec, const SitePotentials* potentials) {
  if (potentials == nullptr) return;
  if (potentials->num_sites() != spec.lattice.size() ||
      potentials->num_colors() != spec.num_colors) {
    throw std::invalid_argument("site potentials do not match the model");
  }
}

std::size_t count_matches(const BlockGeometry& g, std::span<const int> x,
                          const BorderCondition* border) {
  std::size_t s = 0;
  for (const auto& [a, b] : g.internal) s += x[a] == x[b];
  if (border != nullptr && !border->empty()) {
    for (const auto& [a, j] : g.crossing) s += x[a] == border->color_at(j);
  }
  return s;
}

}  // namespace

void PottsSpec::validate() const {
  if (num_colors < 2) throw std::invalid_argument("Potts model needs at least two colors");
  if (!std::isfinite(psi)) throw std::invalid_argument("interaction parameter must be finite");
}

SitePotentials::SitePotentials(std::size_t num_sites, int num_colors, double fill)
    : num_sites_(num_sites),
      num_colors_(num_colors),
      table_(num_sites * static_cast<std::size_t>(num_colors), fill) {
  if (num_colors < 1) throw std::invalid_argument("potentials need at least one color");
}

BorderCondition::BorderCondition(std::vector<std::pair<Site, int>> values)
    : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i].first == values_[i - 1].first) {
      throw std::invalid_argument("duplicate border site");
    }
  }
}

BorderCondition BorderCondition::from_field(const Lattice& lattice, const Block& block,
                                            Neighborhood system, std::span<const int> field) {
  if (field.size() != lattice.size()) throw std::invalid_argument("field size mismatch");
  std::vector<std::pair<Site, int>> values;
  for (Site j : block_border(lattice, block, system)) values.emplace_back(j, field[j]);
  return BorderCondition(std::move(values));
}

int BorderCondition::color_at(Site j) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), std::pair<Site, int>{j, -1});
  return (it != values_.end() && it->first == j) ? it->second : -1;
}

std::size_t sufficient_statistic(std::span<const int> field, const Lattice& lattice,
                                 Neighborhood system, int num_colors) {
  if (field.size() != lattice.size()) throw std::invalid_argument("field size mismatch");
  check_colors(field, num_colors);
  std::size_t s = 0;
  for (const auto& [i, j] : edges(lattice, system)) s += field[i] == field[j];
  return s;
}

std::size_t conditioned_statistic(std::span<const int> block_colors, const Lattice& lattice,
                                  const Block& block, Neighborhood system, int num_colors,
                                  const BorderCondition* border) {
  check_block(lattice, block);
  if (block_colors.size() != block.size()) throw std::invalid_argument("block field size mismatch");
  check_colors(block_colors, num_colors);
  check_border(lattice, block, system, num_colors, border);
  return count_matches(block_geometry(lattice, block, system), block_colors, border);
}

double log_partition_bruteforce(const PottsSpec& spec, const Block* block,
                                const SitePotentials* potentials, const BorderCondition* border) {
  spec.validate();
  const Block whole{0, 0, spec.lattice.height(), spec.lattice.width()};
  const Block& b = block != nullptr ? *block : whole;
  check_block(spec.lattice, b);
  check_border(spec.lattice, b, spec.system, spec.num_colors, border);
  check_potentials(spec, potentials);

  const std::size_t m = b.size();
  const int K = spec.num_colors;
  if (static_cast<double>(m) * std::log2(static_cast<double>(K)) > kMaxEnumerationLog2) {
    throw std::length_error("block too large for exhaustive enumeration");
  }
  const BlockGeometry g = block_geometry(spec.lattice, b, spec.system);

  std::vector<int> x(m, 0);
  LogSum total;
  while (true) {
    double energy = spec.psi * static_cast<double>(count_matches(g, x, border));
    if (potentials != nullptr) {
      for (std::size_t a = 0; a < m; ++a) energy += (*potentials)(g.sites[a], x[a]);
    }
    total.add(energy);
    // Odometer increment over {0..K-1}^m.
    std::size_t a = 0;
    while (a < m && ++x[a] == K) x[a++] = 0;
    if (a == m) break;
  }
  return total.value();
}

std::size_t recursion_lag(const Block& block, Neighborhood system) {
  const std::size_t shorter = std::min(block.height, block.width);
  const std::size_t lag = system == Neighborhood::G8 ? shorter + 1 : shorter;
  return std::min(lag, block.size());
}

bool recursion_feasible(const Block& block, Neighborhood system, int num_colors) {
  return static_cast<double>(recursion_lag(block, system)) *
             std::log2(static_cast<double>(num_colors)) <=
         kMaxMessageLog2;
}

double log_partition_recursive(const PottsSpec& spec, const Block& block,
                               const SitePotentials* potentials, const BorderCondition* border) {
  spec.validate();
  check_block(spec.lattice, block);
  check_border(spec.lattice, block, spec.system, spec.num_colors, border);
  check_potentials(spec, potentials);
  const int K = spec.num_colors;
  if (!recursion_feasible(block, spec.system, K)) {
    throw std::length_error("block too large for the recursion with this many colors");
  }

  const Lattice& lattice = spec.lattice;
  const bool g8 = spec.system == Neighborhood::G8;
  // Elimination layout: sites visited column by column along the longer
  // axis; H is the column length.
  const bool transposed = block.height > block.width;
  const std::size_t H = transposed ? block.width : block.height;
  const std::size_t m = block.size();
  auto global_site = [&](std::size_t t) {
    const std::size_t r = t % H;
    const std::size_t c = t / H;
    return transposed ? lattice.index(block.row0 + c, block.col0 + r)
                      : lattice.index(block.row0 + r, block.col0 + c);
  };

  // Singleton potentials with the border folded in, in elimination order.
  const bool has_border = border != nullptr && !border->empty();
  std::vector<double> local(m * K, 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    const Site i = global_site(t);
    double* row = local.data() + t * K;
    if (potentials != nullptr) {
      for (int k = 0; k < K; ++k) row[k] = (*potentials)(i, k);
    }
    if (has_border) {
      for (Site j : neighbors(lattice, spec.system, i)) {
        if (block.contains(lattice, j)) continue;
        row[border->color_at(j)] += spec.psi;
      }
    }
  }

  // State digit d holds the color of the site eliminated d+1 steps ago.
  const std::size_t W = g8 ? H + 1 : H;
  std::vector<std::size_t> pow(W + 1, 1);
  for (std::size_t d = 1; d <= W; ++d) pow[d] = pow[d - 1] * K;
  const std::size_t full_size = pow[W];
  const std::size_t top = pow[W - 1];

  std::vector<double> msg(1, 0.0);
  std::vector<double> next;
  std::vector<int> digits(W, 0);
  std::vector<std::size_t> lag_digits;
  lag_digits.reserve(4);

  for (std::size_t t = 0; t < m; ++t) {
    const std::size_t r = t % H;
    const std::size_t c = t / H;
    lag_digits.clear();
    if (r > 0) lag_digits.push_back(0);              // previous site in the column
    if (c > 0) lag_digits.push_back(H - 1);          // same row, previous column
    if (g8 && c > 0 && r > 0) lag_digits.push_back(H);
    if (g8 && c > 0 && r + 1 < H) lag_digits.push_back(H - 2);

    const bool full = msg.size() == full_size;
    const std::size_t next_size = full ? full_size : msg.size() * K;
    next.assign(next_size, kNegInf);
    const double* pot = local.data() + t * K;

    for (std::size_t s = 0; s < next_size; ++s) {
      const int k = static_cast<int>(s % K);
      const std::size_t prefix = s / K;
      // Old digits 0..W-2 are the digits of prefix; digit W-1 is dropped.
      std::size_t rest = prefix;
      for (std::size_t d = 0; d + 1 < W; ++d) {
        digits[d] = static_cast<int>(rest % K);
        rest /= K;
      }
      double base = pot[k];
      bool dropped_is_neighbor = false;
      for (std::size_t d : lag_digits) {
        if (d + 1 == W) {
          dropped_is_neighbor = true;
        } else if (digits[d] == k) {
          base += spec.psi;
        }
      }
      if (!full) {
        next[s] = msg[prefix] + base;
        continue;
      }
      double best = kNegInf;
      for (int d = 0; d < K; ++d) {
        const double v = msg[prefix + d * top] + (dropped_is_neighbor && d == k ? spec.psi : 0.0);
        best = std::max(best, v);
      }
      if (best == kNegInf) continue;
      double sum = 0.0;
      for (int d = 0; d < K; ++d) {
        const double v = msg[prefix + d * top] + (dropped_is_neighbor && d == k ? spec.psi : 0.0);
        sum += std::exp(v - best);
      }
      next[s] = base + best + std::log(sum);
    }
    msg.swap(next);
  }

  LogSum total;
  for (double v : msg) total.add(v);
  return total.value();
}

}  // namespace blic
