#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "blic/criteria.hpp"
#include "blic/grid.hpp"
#include "blic/noise.hpp"

namespace blic {

using Summary = std::array<double, 2>;

struct UniformPrior {
  double lower = 0.0;
  double upper = 1.0;
};

/// Interaction priors of the two competing graphs.
struct GraphPriors {
  UniformPrior g4{0.0, 1.0};
  UniformPrior g8{0.0, 0.35};

  const UniformPrior& operator[](Neighborhood system) const {
    return system == Neighborhood::G4 ? g4 : g8;
  }
};

struct ReferenceRow {
  CandidateModel model;
  double psi = 0.0;
  Summary summary{};
};

struct ReferenceTable {
  std::vector<ReferenceRow> rows;
  GraphPriors priors;
};

/// Share of monochromatic G4 edges and of monochromatic G8 edges in the
/// marginal-MAP segmentation of y.
Summary summary_2d(std::span<const double> y, const Lattice& lattice,
                   const EmissionParams& reference);

struct TableSettings {
  std::size_t burnin = 500;
  std::size_t threads = 1;
};

/// Rows draw a graph uniformly, psi from its prior, a field by Swendsen-Wang
/// and y by emission; row r uses stream r of `seed`. Throws for size 0.
ReferenceTable build_table(std::size_t size, const GraphPriors& priors, const Lattice& lattice,
                           const EmissionParams& emission, std::uint64_t seed,
                           const TableSettings& settings = {});

/// Majority label of the k nearest rows after standardizing each summary
/// coordinate over the table; ties go to G4.
CandidateModel knn_classify(const ReferenceTable& table, const Summary& observed, std::size_t k);

/// Fraction of test rows whose model knn_classify gets wrong.
double prior_error_rate(const ReferenceTable& table, const ReferenceTable& test, std::size_t k);

/// CSV with header `model,psi,s_g4,s_g8`.
void write_table_csv(std::ostream& out, const ReferenceTable& table);
ReferenceTable read_table_csv(std::istream& in, int num_colors = 2);

}  // namespace blic
