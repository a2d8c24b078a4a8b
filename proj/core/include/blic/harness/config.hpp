#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blic/abc.hpp"
#include "blic/grid.hpp"

namespace blic::harness {

/// Bad configuration text or values; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One criterion column of an experiment.
struct CriterionSpec {
  enum class Kind { Plic, BicMf, Blic };
  Kind kind = Kind::Blic;
  std::size_t block = 1;
  /// Blic only: fix borders to the simulated-field segmentation.
  bool fixed_border = false;

  /// "PLIC", "BIC_MF", "BLIC_bxb" or "BLIC_MF_bxb".
  std::string name() const;
  static CriterionSpec parse(std::string_view text);
  /// Needs an ICM fit (PLIC) rather than a simulated-field fit.
  bool uses_icm() const { return kind == Kind::Plic; }
  std::size_t block_size() const { return kind == Kind::Blic ? block : 1; }

  bool operator==(const CriterionSpec&) const = default;
};

struct ExperimentConfig {
  std::size_t height = 48;
  std::size_t width = 48;

  Neighborhood true_system = Neighborhood::G4;
  int true_colors = 4;
  double true_psi = 1.0;
  double noise_sd = 0.5;

  int k_min = 2;
  int k_max = 7;
  std::vector<Neighborhood> systems{Neighborhood::G4};
  std::vector<CriterionSpec> criteria;

  std::size_t replicates = 20;
  std::size_t em_iterations = 200;
  std::size_t icm_iterations = 200;
  std::size_t icm_sweeps = 10;
  std::size_t burnin = 500;

  // ABC comparison.
  std::size_t test_size = 200;
  std::size_t table_size = 5000;
  std::size_t knn_k = 100;
  std::size_t table_burnin = 500;
  GraphPriors priors;

  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::size_t threads = 1;

  Lattice lattice() const { return Lattice(height, width); }
  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// Applies one `key = value` setting. Throws ConfigError for unknown keys or
/// bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines; `#` starts a comment. Does not validate.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Round-trippable text form of the configuration.
std::string describe(const ExperimentConfig& config);

}  // namespace blic::harness
