// Command-line front end: simulation, fitting, criteria and the experiments.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "blic/abc.hpp"
#include "blic/criteria.hpp"
#include "blic/fit.hpp"
#include "blic/format.hpp"
#include "blic/harness/config.hpp"
#include "blic/harness/experiments.hpp"
#include "blic/harness/field_io.hpp"
#include "blic/samplers.hpp"

namespace fs = std::filesystem;
using namespace blic;
using namespace blic::harness;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> settings;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  std::size_t threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "flat `key = value` configuration file");
  cmd->add_option("--set", o.settings, "override one setting, e.g. --set replicates=5");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&o](std::uint64_t s) { o.seed = s, o.seed_set = true; }, "master seed");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads");
}

ExperimentConfig resolve(const CommonOptions& o, ExperimentConfig base) {
  ExperimentConfig c = o.config_path.empty() ? std::move(base) : load_config(o.config_path, std::move(base));
  for (const auto& s : o.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.seed_set) c.seed = o.seed;
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  if (o.threads > 0) c.threads = o.threads;
  return c;
}

ExperimentConfig experiment1_defaults() {
  ExperimentConfig c;
  c.criteria = {CriterionSpec::parse("PLIC"), CriterionSpec::parse("BIC_MF"),
                CriterionSpec::parse("BLIC_MF_2x2"), CriterionSpec::parse("BLIC_1x1"),
                CriterionSpec::parse("BLIC_2x2")};
  return c;
}

ExperimentConfig experiment2_defaults() {
  ExperimentConfig c;
  c.true_system = Neighborhood::G8;
  c.true_psi = 0.4;
  c.k_min = c.k_max = 4;
  c.systems = {Neighborhood::G4, Neighborhood::G8};
  c.criteria = {CriterionSpec::parse("PLIC"), CriterionSpec::parse("BIC_MF"),
                CriterionSpec::parse("BLIC_MF_2x2"), CriterionSpec::parse("BLIC_2x2"),
                CriterionSpec::parse("BLIC_4x4")};
  return c;
}

ExperimentConfig experiment3_defaults() {
  ExperimentConfig c;
  c.height = c.width = 32;
  c.true_colors = 2;
  c.noise_sd = 0.39;
  c.k_min = c.k_max = 2;
  c.systems = {Neighborhood::G4, Neighborhood::G8};
  c.criteria = {CriterionSpec::parse("PLIC"), CriterionSpec::parse("BIC_MF"),
                CriterionSpec::parse("BLIC_4x4")};
  return c;
}

void print_selection(const SelectionReport& report) {
  const auto& t = report.table;
  std::cout << "criterion";
  for (const auto& m : t.candidates()) std::cout << '\t' << to_string(m.system) << "/K" << m.num_colors;
  std::cout << '\n';
  for (std::size_t c = 0; c < t.criteria().size(); ++c) {
    std::cout << t.criteria()[c];
    for (const auto& m : t.candidates()) std::cout << '\t' << t.count(c, m);
    std::cout << '\n';
  }
}

void print_theta(const HiddenPottsParams& theta) {
  std::cout << "psi = " << format_double(theta.psi) << '\n';
  for (int k = 0; k < theta.num_colors(); ++k) {
    std::cout << "component " << k << ": mean = " << format_double(theta.emission[k].mean)
              << ", sd = " << format_double(theta.emission[k].sd) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model choice for hidden Potts fields with block likelihood criteria"};
  app.require_subcommand(1);

  CommonOptions common;

  auto* simulate = app.add_subcommand("simulate", "draw a hidden Potts field and its observation");
  add_common(simulate, common);

  std::string obs_path;
  std::string method = "sf";
  auto* fit = app.add_subcommand("fit", "fit one candidate to an observation");
  add_common(fit, common);
  fit->add_option("--obs", obs_path, "observation file")->required();
  fit->add_option("--method", method, "icm or sf")->check(CLI::IsMember({"icm", "sf"}));

  auto* criterion = app.add_subcommand("criterion", "evaluate the configured criteria on an observation");
  add_common(criterion, common);
  criterion->add_option("--obs", obs_path, "observation file")->required();

  auto* exp1 = app.add_subcommand("exp1", "selection of the number of colors");
  add_common(exp1, common);
  auto* exp2 = app.add_subcommand("exp2", "selection of the neighborhood graph");
  add_common(exp2, common);
  auto* exp3 = app.add_subcommand("exp3", "criteria versus ABC on graph choice");
  add_common(exp3, common);
  auto* table = app.add_subcommand("abc-table", "simulate an ABC reference table");
  add_common(table, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      ExperimentConfig c = resolve(common, ExperimentConfig{});
      c.criteria = {CriterionSpec::parse("BLIC_1x1")};
      c.validate();
      const PottsSpec spec{c.lattice(), c.true_system, c.true_colors, c.true_psi};
      Rng rng(c.seed);
      const auto sample = simulate_hidden(
          spec, EmissionParams::integer_means(c.true_colors, c.noise_sd), c.burnin, rng);
      fs::create_directories(c.output_dir);
      save_labels((fs::path(c.output_dir) / "field.txt").string(),
                  {spec.lattice, spec.num_colors, sample.x});
      save_observation((fs::path(c.output_dir) / "observation.txt").string(),
                       {spec.lattice, sample.y});
      std::cout << "wrote " << c.output_dir << "/field.txt and observation.txt\n";
    } else if (fit->parsed()) {
      ExperimentConfig c = resolve(common, ExperimentConfig{});
      const auto obs = load_observation(obs_path);
      const FitSkeleton skeleton{obs.lattice, c.true_system, c.true_colors};
      const FitInit init = initial_fit(obs.values, skeleton);
      FitOptions options;
      options.iterations = method == "icm" ? c.icm_iterations : c.em_iterations;
      options.max_sweeps = c.icm_sweeps;
      Rng rng(c.seed);
      const FitResult r = method == "icm" ? icm_fit(obs.values, skeleton, init, options)
                                          : simulated_field_em(obs.values, skeleton, init, rng, options);
      print_theta(r.theta);
      fs::create_directories(c.output_dir);
      save_labels((fs::path(c.output_dir) / "segmentation.txt").string(),
                  {obs.lattice, skeleton.num_colors, r.segmentation});
    } else if (criterion->parsed()) {
      ExperimentConfig c = resolve(common, experiment1_defaults());
      const auto obs = load_observation(obs_path);
      c.height = obs.lattice.height();
      c.width = obs.lattice.width();
      c.validate();
      const auto values = evaluate_candidates(obs.values, c, c.seed);
      fs::create_directories(c.output_dir);
      std::ofstream out(fs::path(c.output_dir) / "criteria.csv");
      out << "replicate,criterion,G,K,value,d_m,loglik\n";
      for (const auto& v : values) {
        const std::string line = "0," + v.name + ',' + std::string(to_string(v.model.system)) + ',' +
                                 std::to_string(v.model.num_colors) + ',' + format_double(v.value) +
                                 ',' + std::to_string(v.free_parameters) + ',' +
                                 format_double(v.block_loglik);
        out << line << '\n';
        std::cout << line << '\n';
      }
    } else if (exp1->parsed() || exp2->parsed()) {
      const ExperimentConfig c =
          resolve(common, exp1->parsed() ? experiment1_defaults() : experiment2_defaults());
      const auto report = exp1->parsed() ? run_experiment1(c) : run_experiment2(c);
      write_selection_outputs(report, c);
      print_selection(report);
    } else if (exp3->parsed()) {
      const ExperimentConfig c = resolve(common, experiment3_defaults());
      const auto report = run_experiment3(c);
      write_abc_outputs(report, c);
      for (const auto& r : report.rates) {
        std::cout << r.method << '\t' << format_double(r.error_rate) << '\n';
      }
    } else if (table->parsed()) {
      ExperimentConfig c = resolve(common, experiment3_defaults());
      c.validate();
      const auto t = build_reference_table(c);
      fs::create_directories(c.output_dir);
      std::ofstream out(fs::path(c.output_dir) / "reference_table.csv");
      write_table_csv(out, t);
      std::cout << "wrote " << t.rows.size() << " rows to " << c.output_dir << "/reference_table.csv\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
