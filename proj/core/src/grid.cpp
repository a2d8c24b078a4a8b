#include "blic/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace blic {

Lattice::Lattice(std::size_t height, std::size_t width) : height_(height), width_(width) {
  if (height == 0 || width == 0) {
    throw std::invalid_argument("lattice dimensions must be positive");
  }
}

std::string_view to_string(Neighborhood system) {
  return system == Neighborhood::G4 ? "G4" : "G8";
}

Neighborhood parse_neighborhood(std::string_view text) {
  if (text == "G4" || text == "g4" || text == "4") return Neighborhood::G4;
  if (text == "G8" || text == "g8" || text == "8") return Neighborhood::G8;
  throw std::invalid_argument("unknown neighborhood system '" + std::string(text) + "'");
}

std::vector<Site> neighbors(const Lattice& lattice, Neighborhood system, Site i) {
  if (i >= lattice.size()) throw std::out_of_range("site index out of range");
  const auto r = static_cast<long>(lattice.row(i));
  const auto c = static_cast<long>(lattice.col(i));
  const auto h = static_cast<long>(lattice.height());
  const auto w = static_cast<long>(lattice.width());
  std::vector<Site> out;
  out.reserve(8);
  // Offsets listed in row-major order so the result comes out sorted.
  for (long dr = -1; dr <= 1; ++dr) {
    for (long dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (system == Neighborhood::G4 && dr != 0 && dc != 0) continue;
      const long rr = r + dr;
      const long cc = c + dc;
      if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
      out.push_back(lattice.index(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)));
    }
  }
  return out;
}

std::vector<std::pair<Site, Site>> edges(const Lattice& lattice, Neighborhood system) {
  std::vector<std::pair<Site, Site>> out;
  for (Site i = 0; i < lattice.size(); ++i) {
    for (Site j : neighbors(lattice, system, i)) {
      if (j > i) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t edge_count(const Lattice& lattice, Neighborhood system) {
  const std::size_t h = lattice.height();
  const std::size_t w = lattice.width();
  std::size_t count = h * (w - 1) + (h - 1) * w;
  if (system == Neighborhood::G8) count += 2 * (h - 1) * (w - 1);
  return count;
}

Adjacency::Adjacency(const Lattice& lattice, Neighborhood system)
    : lattice_(lattice), system_(system) {
  offsets_.reserve(lattice.size() + 1);
  offsets_.push_back(0);
  for (Site i = 0; i < lattice.size(); ++i) {
    const auto nb = neighbors(lattice, system, i);
    sites_.insert(sites_.end(), nb.begin(), nb.end());
    offsets_.push_back(sites_.size());
  }
}

bool Block::contains(const Lattice& lattice, Site i) const {
  const std::size_t r = lattice.row(i);
  const std::size_t c = lattice.col(i);
  return r >= row0 && r < row0 + height && c >= col0 && c < col0 + width;
}

std::vector<Site> Block::sites(const Lattice& lattice) const {
  std::vector<Site> out;
  out.reserve(size());
  for (std::size_t r = row0; r < row0 + height; ++r) {
    for (std::size_t c = col0; c < col0 + width; ++c) out.push_back(lattice.index(r, c));
  }
  return out;
}

BlockPartition::BlockPartition(Lattice lattice, std::vector<Block> blocks, BorderMode mode)
    : lattice_(lattice), blocks_(std::move(blocks)), mode_(mode) {
  std::vector<char> covered(lattice_.size(), 0);
  for (const Block& b : blocks_) {
    if (b.height == 0 || b.width == 0 || b.row0 + b.height > lattice_.height() ||
        b.col0 + b.width > lattice_.width()) {
      throw std::invalid_argument("block does not fit in the lattice");
    }
    for (Site i : b.sites(lattice_)) {
      if (covered[i]) throw std::invalid_argument("blocks overlap");
      covered[i] = 1;
    }
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
    throw std::invalid_argument("blocks do not cover the lattice");
  }
}

const Block& BlockPartition::block(std::size_t l) const {
  if (l >= blocks_.size()) throw std::out_of_range("block index out of range");
  return blocks_[l];
}

BlockPartition regular_partition(const Lattice& lattice, std::size_t b, BorderMode mode) {
  if (b == 0) throw std::invalid_argument("block size must be positive");
  std::vector<Block> blocks;
  for (std::size_t r = 0; r < lattice.height(); r += b) {
    for (std::size_t c = 0; c < lattice.width(); c += b) {
      blocks.push_back(Block{r, c, std::min(b, lattice.height() - r),
                             std::min(b, lattice.width() - c)});
    }
  }
  return BlockPartition(lattice, std::move(blocks), mode);
}

std::vector<Site> block_border(const Lattice& lattice, const Block& block, Neighborhood system) {
  std::vector<Site> out;
  for (Site i : block.sites(lattice)) {
    for (Site j : neighbors(lattice, system, i)) {
      if (!block.contains(lattice, j)) out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Site> block_border(const BlockPartition& partition, std::size_t l,
                               Neighborhood system) {
  const Block& b = partition.block(l);
  if (partition.border_mode() == BorderMode::Empty) return {};
  return block_border(partition.lattice(), b, system);
}

}  // namespace blic
