#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blic {

using Site = std::size_t;

/// Rectangular site grid, sites numbered row-major from 0.
class Lattice {
 public:
  Lattice(std::size_t height, std::size_t width);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return height_ * width_; }

  Site index(std::size_t row, std::size_t col) const { return row * width_ + col; }
  std::size_t row(Site i) const { return i / width_; }
  std::size_t col(Site i) const { return i % width_; }

  bool operator==(const Lattice&) const = default;

 private:
  std::size_t height_;
  std::size_t width_;
};

/// First-order (rook) or second-order (king) adjacency, free boundary.
enum class Neighborhood { G4, G8 };

std::string_view to_string(Neighborhood system);
Neighborhood parse_neighborhood(std::string_view text);

/// Neighbors of site i, sorted ascending. Throws std::out_of_range.
std::vector<Site> neighbors(const Lattice& lattice, Neighborhood system, Site i);

/// Every undirected edge once, as (i, j) with i < j, in ascending order.
std::vector<std::pair<Site, Site>> edges(const Lattice& lattice, Neighborhood system);

std::size_t edge_count(const Lattice& lattice, Neighborhood system);

/// Precomputed adjacency lists for repeated sweeps over one lattice.
class Adjacency {
 public:
  Adjacency(const Lattice& lattice, Neighborhood system);

  const Lattice& lattice() const { return lattice_; }
  Neighborhood system() const { return system_; }

  const Site* begin(Site i) const { return sites_.data() + offsets_[i]; }
  const Site* end(Site i) const { return sites_.data() + offsets_[i + 1]; }
  std::size_t degree(Site i) const { return offsets_[i + 1] - offsets_[i]; }

 private:
  Lattice lattice_;
  Neighborhood system_;
  std::vector<std::size_t> offsets_;
  std::vector<Site> sites_;
};

struct Block {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const { return height * width; }
  bool contains(const Lattice& lattice, Site i) const;
  /// Global indices of the block's sites in row-major order.
  std::vector<Site> sites(const Lattice& lattice) const;

  bool operator==(const Block&) const = default;
};

/// Whether block borders are fixed to a reference field or dropped.
enum class BorderMode { Empty, FixedField };

class BlockPartition {
 public:
  /// Validates that the blocks tile the lattice without overlap.
  BlockPartition(Lattice lattice, std::vector<Block> blocks, BorderMode mode);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  BorderMode border_mode() const { return mode_; }
  std::size_t size() const { return blocks_.size(); }
  const Block& block(std::size_t l) const;

 private:
  Lattice lattice_;
  std::vector<Block> blocks_;
  BorderMode mode_;
};

/// Row-major tiling by b x b squares; trailing blocks are cut short when b
/// does not divide the lattice dimensions.
BlockPartition regular_partition(const Lattice& lattice, std::size_t b, BorderMode mode);

/// Sites outside a block adjacent to one of its sites, ascending.
std::vector<Site> block_border(const Lattice& lattice, const Block& block, Neighborhood system);

/// Border of block l; empty when the partition drops borders.
std::vector<Site> block_border(const BlockPartition& partition, std::size_t l,
                               Neighborhood system);

}  // namespace blic
