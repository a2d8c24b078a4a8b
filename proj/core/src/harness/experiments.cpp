#include "blic/harness/experiments.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "blic/abc.hpp"
#include "blic/format.hpp"
#include "blic/parallel.hpp"

namespace blic::harness {

namespace {

// Fixed stream ids under the master seed.
constexpr std::uint64_t kTableStream = 1;
constexpr std::uint64_t kTestStream = 2;

std::vector<std::string> criterion_names(const ExperimentConfig& config) {
  std::vector<std::string> names;
  for (const auto& c : config.criteria) names.push_back(c.name());
  return names;
}

FitOptions fit_options(const ExperimentConfig& config, bool icm) {
  FitOptions o;
  o.iterations = icm ? config.icm_iterations : config.em_iterations;
  o.max_sweeps = config.icm_sweeps;
  return o;
}

std::ofstream open_output(const ExperimentConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.output_dir);
  const auto path = std::filesystem::path(config.output_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

// Selected candidate per criterion; values are candidate-major.
std::vector<CandidateModel> select_per_criterion(const std::vector<CriterionValue>& values,
                                                 std::size_t num_criteria) {
  std::vector<CandidateModel> out;
  for (std::size_t c = 0; c < num_criteria; ++c) {
    std::vector<CriterionValue> column;
    for (std::size_t i = c; i < values.size(); i += num_criteria) column.push_back(values[i]);
    out.push_back(select_model(column));
  }
  return out;
}

SelectionReport run_selection(const ExperimentConfig& config) {
  config.validate();
  const Lattice lattice = config.lattice();
  const PottsSpec truth{lattice, config.true_system, config.true_colors, config.true_psi};
  const EmissionParams emission = EmissionParams::integer_means(config.true_colors, config.noise_sd);

  std::vector<ReplicateResult> results(config.replicates);
  parallel_for(config.replicates, config.threads, [&](std::size_t r) {
    ReplicateResult& out = results[r];
    out.replicate = r;
    out.seed = derive_seed(config.seed, r);
    try {
      Rng sim(derive_seed(out.seed, 0));
      const HiddenSample sample = simulate_hidden(truth, emission, config.burnin, sim);
      out.values = evaluate_candidates(sample.y, config, derive_seed(out.seed, 1));
      out.selected = select_per_criterion(out.values, config.criteria.size());
    } catch (const std::exception& e) {
      out.error = e.what();
      out.values.clear();
      out.selected.clear();
    }
  });

  SelectionReport report{SelectionTable(criterion_names(config), candidate_grid(config)), {}};
  for (const auto& r : results) {
    if (!r.error.empty()) {
      std::cerr << "replicate " << r.replicate << " failed: " << r.error << '\n';
      continue;
    }
    for (std::size_t c = 0; c < r.selected.size(); ++c) report.table.record(c, r.selected[c]);
  }
  report.replicates = std::move(results);
  return report;
}

}  // namespace

std::vector<CandidateModel> candidate_grid(const ExperimentConfig& config) {
  std::vector<CandidateModel> out;
  for (Neighborhood g : config.systems) {
    for (int k = config.k_min; k <= config.k_max; ++k) out.push_back({g, k});
  }
  return out;
}

std::vector<CriterionValue> evaluate_candidates(std::span<const double> y,
                                                const ExperimentConfig& config,
                                                std::uint64_t seed) {
  const Lattice lattice = config.lattice();
  const bool need_icm = std::any_of(config.criteria.begin(), config.criteria.end(),
                                    [](const auto& c) { return c.uses_icm(); });
  const bool need_em = std::any_of(config.criteria.begin(), config.criteria.end(),
                                   [](const auto& c) { return !c.uses_icm(); });
  const auto candidates = candidate_grid(config);
  std::vector<CriterionValue> values;
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const CandidateModel& model = candidates[ci];
    const FitSkeleton skeleton{lattice, model.system, model.num_colors};
    const FitInit init = initial_fit(y, skeleton);
    FitResult icm, em;
    if (need_icm) icm = icm_fit(y, skeleton, init, fit_options(config, true));
    if (need_em) {
      Rng rng(derive_seed(seed, ci));
      em = simulated_field_em(y, skeleton, init, rng, fit_options(config, false));
    }
    for (const auto& c : config.criteria) {
      switch (c.kind) {
        case CriterionSpec::Kind::Plic:
          values.push_back(plic(y, lattice, model, icm));
          break;
        case CriterionSpec::Kind::BicMf:
          values.push_back(bic_mf_like(y, lattice, model, em));
          break;
        case CriterionSpec::Kind::Blic:
          values.push_back(blic(y, lattice, c.block, em.theta, model,
                                c.fixed_border ? &em.segmentation : nullptr));
          break;
      }
    }
  }
  return values;
}

SelectionTable::SelectionTable(std::vector<std::string> criteria,
                               std::vector<CandidateModel> candidates)
    : criteria_(std::move(criteria)),
      candidates_(std::move(candidates)),
      counts_(criteria_.size(), std::vector<std::size_t>(candidates_.size(), 0)) {}

std::size_t SelectionTable::criterion_index(const std::string& name) const {
  const auto it = std::find(criteria_.begin(), criteria_.end(), name);
  if (it == criteria_.end()) throw std::out_of_range("unknown criterion " + name);
  return static_cast<std::size_t>(it - criteria_.begin());
}

std::size_t SelectionTable::candidate_index(const CandidateModel& m) const {
  const auto it = std::find(candidates_.begin(), candidates_.end(), m);
  if (it == candidates_.end()) throw std::out_of_range("unknown candidate");
  return static_cast<std::size_t>(it - candidates_.begin());
}

void SelectionTable::record(std::size_t criterion, const CandidateModel& selected) {
  ++counts_.at(criterion)[candidate_index(selected)];
}

std::size_t SelectionTable::count(std::size_t criterion, const CandidateModel& candidate) const {
  return counts_.at(criterion)[candidate_index(candidate)];
}

std::size_t SelectionTable::count(const std::string& criterion,
                                  const CandidateModel& candidate) const {
  return count(criterion_index(criterion), candidate);
}

std::size_t SelectionTable::row_total(std::size_t criterion) const {
  const auto& row = counts_.at(criterion);
  std::size_t total = 0;
  for (auto v : row) total += v;
  return total;
}

SelectionReport run_experiment1(const ExperimentConfig& config) {
  for (Neighborhood g : config.systems) {
    if (g != config.true_system) {
      throw ConfigError("experiment 1 candidates must use the true graph");
    }
  }
  return run_selection(config);
}

SelectionReport run_experiment2(const ExperimentConfig& config) { return run_selection(config); }

std::vector<DeltaRow> delta_rows(const SelectionReport& report) {
  std::vector<DeltaRow> rows;
  const auto& criteria = report.table.criteria();
  for (const auto& r : report.replicates) {
    if (!r.error.empty()) continue;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
      std::vector<Neighborhood> systems;
      for (const auto& m : report.table.candidates()) {
        if (std::find(systems.begin(), systems.end(), m.system) == systems.end()) {
          systems.push_back(m.system);
        }
      }
      for (Neighborhood g : systems) {
        std::vector<CriterionValue> curve;
        for (const auto& v : r.values) {
          if (v.name == criteria[c] && v.model.system == g) curve.push_back(v);
        }
        const auto deltas = delta_curve(curve);
        int k0 = curve.front().model.num_colors;
        for (const auto& v : curve) k0 = std::min(k0, v.model.num_colors);
        for (std::size_t i = 0; i < deltas.size(); ++i) {
          rows.push_back({r.replicate, criteria[c], g, k0 + static_cast<int>(i), deltas[i]});
        }
      }
    }
  }
  return rows;
}

void write_selection_outputs(const SelectionReport& report, const ExperimentConfig& config) {
  {
    auto out = open_output(config, "config.txt");
    out << describe(config);
  }
  {
    auto out = open_output(config, "selection.csv");
    out << "criterion,G,K,count\n";
    for (std::size_t c = 0; c < report.table.criteria().size(); ++c) {
      for (const auto& m : report.table.candidates()) {
        out << report.table.criteria()[c] << ',' << to_string(m.system) << ',' << m.num_colors
            << ',' << report.table.count(c, m) << '\n';
      }
    }
  }
  {
    auto out = open_output(config, "criteria.csv");
    out << "replicate,criterion,G,K,value,d_m,loglik\n";
    for (const auto& r : report.replicates) {
      for (const auto& v : r.values) {
        out << r.replicate << ',' << v.name << ',' << to_string(v.model.system) << ','
            << v.model.num_colors << ',' << format_double(v.value) << ',' << v.free_parameters
            << ',' << format_double(v.block_loglik) << '\n';
      }
    }
  }
  {
    auto out = open_output(config, "delta.csv");
    out << "replicate,criterion,G,K,delta\n";
    for (const auto& d : delta_rows(report)) {
      out << d.replicate << ',' << d.criterion << ',' << to_string(d.system) << ','
          << d.num_colors << ',' << format_double(d.delta) << '\n';
    }
  }
  bool any_failed = false;
  for (const auto& r : report.replicates) any_failed |= !r.error.empty();
  if (any_failed) {
    auto out = open_output(config, "failures.csv");
    out << "replicate,error\n";
    for (const auto& r : report.replicates) {
      if (!r.error.empty()) out << r.replicate << ",\"" << r.error << "\"\n";
    }
  }
}

ReferenceTable build_reference_table(const ExperimentConfig& config) {
  const EmissionParams emission = EmissionParams::integer_means(config.true_colors, config.noise_sd);
  return build_table(config.table_size, config.priors, config.lattice(), emission,
                     derive_seed(config.seed, kTableStream),
                     TableSettings{config.table_burnin, config.threads});
}

AbcReport run_experiment3(const ExperimentConfig& config) {
  config.validate();
  if (config.test_size == 0) throw ConfigError("test_size must be positive");
  if (config.knn_k == 0 || config.knn_k > config.table_size) {
    throw ConfigError("knn_k must lie in [1, table_size]");
  }
  for (const auto& m : candidate_grid(config)) {
    if (m.num_colors != config.true_colors) {
      throw ConfigError("experiment 3 candidates must use the true number of colors");
    }
  }
  const Lattice lattice = config.lattice();
  const EmissionParams emission = EmissionParams::integer_means(config.true_colors, config.noise_sd);
  const ReferenceTable table = build_reference_table(config);
  const std::uint64_t test_seed = derive_seed(config.seed, kTestStream);
  const std::size_t num_criteria = config.criteria.size();

  AbcReport report;
  report.tests.resize(config.test_size);
  parallel_for(config.test_size, config.threads, [&](std::size_t t) {
    Rng rng(derive_seed(test_seed, t));
    TestOutcome& out = report.tests[t];
    out.test = t;
    out.truth = rng.uniform() < 0.5 ? Neighborhood::G4 : Neighborhood::G8;
    const UniformPrior& prior = config.priors[out.truth];
    out.psi = rng.uniform(prior.lower, prior.upper);
    Rng sim = rng.split(1);
    const HiddenSample sample = simulate_hidden({lattice, out.truth, config.true_colors, out.psi},
                                                emission, config.burnin, sim);
    out.predicted.push_back(
        knn_classify(table, summary_2d(sample.y, lattice, emission), config.knn_k).system);
    const auto values = evaluate_candidates(sample.y, config, rng.split(2).seed());
    for (const auto& m : select_per_criterion(values, num_criteria)) out.predicted.push_back(m.system);
  });

  std::vector<std::string> methods{"ABC_2D"};
  for (const auto& name : criterion_names(config)) methods.push_back(name);
  for (std::size_t j = 0; j < methods.size(); ++j) {
    std::size_t wrong = 0;
    for (const auto& t : report.tests) wrong += t.predicted[j] != t.truth;
    report.rates.push_back({methods[j], j == 0 ? config.table_size : 0,
                            static_cast<double>(wrong) / static_cast<double>(config.test_size)});
  }
  return report;
}

void write_abc_outputs(const AbcReport& report, const ExperimentConfig& config) {
  {
    auto out = open_output(config, "config.txt");
    out << describe(config);
  }
  {
    auto out = open_output(config, "abc_report.csv");
    out << "method,train_size,error_rate\n";
    for (const auto& r : report.rates) {
      out << r.method << ',' << r.train_size << ',' << format_double(r.error_rate) << '\n';
    }
  }
  auto out = open_output(config, "abc_tests.csv");
  out << "test,truth,psi";
  for (const auto& r : report.rates) out << ',' << r.method;
  out << '\n';
  for (const auto& t : report.tests) {
    out << t.test << ',' << to_string(t.truth) << ',' << format_double(t.psi);
    for (Neighborhood g : t.predicted) out << ',' << to_string(g);
    out << '\n';
  }
}

}  // namespace blic::harness
