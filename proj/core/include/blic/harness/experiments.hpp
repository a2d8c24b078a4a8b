#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blic/criteria.hpp"
#include "blic/harness/config.hpp"
#include "blic/samplers.hpp"

namespace blic::harness {

/// Candidates of a configuration: every listed graph crossed with K_min..K_max.
std::vector<CandidateModel> candidate_grid(const ExperimentConfig& config);

/// Fits every candidate to y and evaluates every configured criterion.
/// Values are ordered by candidate, then criterion. Fit seeds derive from
/// `seed` and the candidate index only.
std::vector<CriterionValue> evaluate_candidates(std::span<const double> y,
                                                const ExperimentConfig& config,
                                                std::uint64_t seed);

/// Counts of selected candidates per criterion.
class SelectionTable {
 public:
  SelectionTable(std::vector<std::string> criteria, std::vector<CandidateModel> candidates);

  void record(std::size_t criterion, const CandidateModel& selected);
  std::size_t count(std::size_t criterion, const CandidateModel& candidate) const;
  std::size_t count(const std::string& criterion, const CandidateModel& candidate) const;
  std::size_t row_total(std::size_t criterion) const;

  const std::vector<std::string>& criteria() const { return criteria_; }
  const std::vector<CandidateModel>& candidates() const { return candidates_; }

 private:
  std::size_t criterion_index(const std::string& name) const;
  std::size_t candidate_index(const CandidateModel& m) const;

  std::vector<std::string> criteria_;
  std::vector<CandidateModel> candidates_;
  std::vector<std::vector<std::size_t>> counts_;
};

struct ReplicateResult {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::vector<CriterionValue> values;
  /// One entry per configured criterion.
  std::vector<CandidateModel> selected;
  /// Non-empty when the replicate failed; such replicates are not counted.
  std::string error;
};

struct SelectionReport {
  SelectionTable table;
  std::vector<ReplicateResult> replicates;
};

/// Selection of K with the true graph known. Candidates must all use the
/// true graph.
SelectionReport run_experiment1(const ExperimentConfig& config);
/// Selection of the graph; candidates range over the configured graphs.
SelectionReport run_experiment2(const ExperimentConfig& config);

struct DeltaRow {
  std::size_t replicate;
  std::string criterion;
  Neighborhood system;
  int num_colors;  // delta is value(K + 1) - value(K)
  double delta;
};
std::vector<DeltaRow> delta_rows(const SelectionReport& report);

/// selection.csv, criteria.csv, delta.csv and config.txt under config.output_dir.
void write_selection_outputs(const SelectionReport& report, const ExperimentConfig& config);

struct ErrorRate {
  std::string method;
  std::size_t train_size = 0;  // 0 for criteria
  double error_rate = 0.0;
};

struct TestOutcome {
  std::size_t test = 0;
  Neighborhood truth = Neighborhood::G4;
  double psi = 0.0;
  /// ABC first, then one entry per configured criterion.
  std::vector<Neighborhood> predicted;
};

struct AbcReport {
  std::vector<ErrorRate> rates;
  std::vector<TestOutcome> tests;
};

/// Graph choice between K-color models with psi drawn from the priors:
/// prior error rate of the 2D-summary ABC classifier next to the error rate
/// of each configured criterion on the same test realizations.
AbcReport run_experiment3(const ExperimentConfig& config);

/// abc_report.csv and abc_tests.csv under config.output_dir.
void write_abc_outputs(const AbcReport& report, const ExperimentConfig& config);

/// Reference table of config.table_size rows drawn under the config priors.
ReferenceTable build_reference_table(const ExperimentConfig& config);

}  // namespace blic::harness
