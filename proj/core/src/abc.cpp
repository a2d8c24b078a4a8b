#include "blic/abc.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "blic/format.hpp"
#include "blic/parallel.hpp"
#include "blic/potts.hpp"
#include "blic/samplers.hpp"

namespace blic {

Summary summary_2d(std::span<const double> y, const Lattice& lattice,
                   const EmissionParams& reference) {
  if (y.size() != lattice.size()) throw std::invalid_argument("observation does not match the lattice");
  const auto x = marginal_map(y, reference);
  Summary s{};
  const Neighborhood systems[2] = {Neighborhood::G4, Neighborhood::G8};
  for (int g = 0; g < 2; ++g) {
    const std::size_t total = edge_count(lattice, systems[g]);
    s[g] = total == 0 ? 0.0
                      : static_cast<double>(sufficient_statistic(x, lattice, systems[g],
                                                                 reference.num_colors())) /
                            static_cast<double>(total);
  }
  return s;
}

ReferenceTable build_table(std::size_t size, const GraphPriors& priors, const Lattice& lattice,
                           const EmissionParams& emission, std::uint64_t seed,
                           const TableSettings& settings) {
  if (size == 0) throw std::invalid_argument("reference table size must be positive");
  ReferenceTable table;
  table.priors = priors;
  table.rows.resize(size);
  parallel_for(size, settings.threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    ReferenceRow& row = table.rows[r];
    row.model.system = rng.uniform() < 0.5 ? Neighborhood::G4 : Neighborhood::G8;
    row.model.num_colors = emission.num_colors();
    const UniformPrior& prior = priors[row.model.system];
    row.psi = rng.uniform(prior.lower, prior.upper);
    const PottsSpec spec{lattice, row.model.system, emission.num_colors(), row.psi};
    Rng sim = rng.split(7);
    const HiddenSample sample = simulate_hidden(spec, emission, settings.burnin, sim);
    row.summary = summary_2d(sample.y, lattice, emission);
  });
  return table;
}

CandidateModel knn_classify(const ReferenceTable& table, const Summary& observed, std::size_t k) {
  const auto& rows = table.rows;
  if (rows.empty()) throw std::invalid_argument("empty reference table");
  if (k == 0 || k > rows.size()) throw std::invalid_argument("k must be in [1, table size]");

  Summary mean{}, scale{};
  for (const auto& r : rows) {
    for (int c = 0; c < 2; ++c) mean[c] += r.summary[c];
  }
  for (int c = 0; c < 2; ++c) mean[c] /= static_cast<double>(rows.size());
  for (const auto& r : rows) {
    for (int c = 0; c < 2; ++c) scale[c] += (r.summary[c] - mean[c]) * (r.summary[c] - mean[c]);
  }
  for (int c = 0; c < 2; ++c) {
    scale[c] = std::sqrt(scale[c] / static_cast<double>(rows.size()));
    if (scale[c] == 0.0) scale[c] = 1.0;
  }

  std::vector<std::pair<double, std::size_t>> dist(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double d = 0.0;
    for (int c = 0; c < 2; ++c) {
      const double z = (rows[i].summary[c] - observed[c]) / scale[c];
      d += z * z;
    }
    dist[i] = {d, i};
  }
  std::nth_element(dist.begin(), dist.begin() + static_cast<long>(k - 1), dist.end());
  std::size_t g4 = 0;
  for (std::size_t i = 0; i < k; ++i) g4 += rows[dist[i].second].model.system == Neighborhood::G4;
  const std::size_t g8 = k - g4;
  return {g4 >= g8 ? Neighborhood::G4 : Neighborhood::G8, rows.front().model.num_colors};
}

double prior_error_rate(const ReferenceTable& table, const ReferenceTable& test, std::size_t k) {
  if (test.rows.empty()) throw std::invalid_argument("empty test set");
  std::size_t wrong = 0;
  for (const auto& row : test.rows) {
    wrong += knn_classify(table, row.summary, k).system != row.model.system;
  }
  return static_cast<double>(wrong) / static_cast<double>(test.rows.size());
}

void write_table_csv(std::ostream& out, const ReferenceTable& table) {
  out << "model,psi,s_g4,s_g8\n";
  for (const auto& r : table.rows) {
    out << to_string(r.model.system) << ',' << format_double(r.psi) << ','
        << format_double(r.summary[0]) << ',' << format_double(r.summary[1]) << '\n';
  }
}

ReferenceTable read_table_csv(std::istream& in, int num_colors) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "model,psi,s_g4,s_g8") {
    throw std::invalid_argument("reference table: bad header");
  }
  ReferenceTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (cells.size() != 4) {
      throw std::invalid_argument("reference table line " + std::to_string(line_no) +
                                  ": expected 4 fields");
    }
    ReferenceRow row;
    row.model = {parse_neighborhood(trim(cells[0])), num_colors};
    row.psi = parse_double(cells[1]);
    row.summary = {parse_double(cells[2]), parse_double(cells[3])};
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace blic
