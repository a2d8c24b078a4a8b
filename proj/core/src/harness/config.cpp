#include "blic/harness/config.hpp"

#include <fstream>
#include <sstream>

#include "blic/format.hpp"
#include "blic/potts.hpp"

namespace blic::harness {

namespace {

std::size_t parse_count(std::string_view key, std::string_view value) {
  try {
    const long long v = parse_integer(value);
    if (v < 0) throw std::invalid_argument("negative");
    return static_cast<std::size_t>(v);
  } catch (const std::invalid_argument&) {
    throw ConfigError("'" + std::string(key) + "' needs a non-negative integer, got '" +
                      std::string(value) + "'");
  }
}

double parse_real(std::string_view key, std::string_view value) {
  try {
    return parse_double(value);
  } catch (const std::invalid_argument&) {
    throw ConfigError("'" + std::string(key) + "' needs a number, got '" + std::string(value) + "'");
  }
}

UniformPrior parse_prior(std::string_view key, std::string_view value) {
  const auto parts = split(value, ',');
  if (parts.size() != 2) throw ConfigError("'" + std::string(key) + "' needs 'lower, upper'");
  UniformPrior p{parse_real(key, parts[0]), parse_real(key, parts[1])};
  if (!(p.lower < p.upper)) throw ConfigError("'" + std::string(key) + "' needs lower < upper");
  return p;
}

std::string join_systems(const std::vector<Neighborhood>& systems) {
  std::string out;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(systems[i]);
  }
  return out;
}

}  // namespace

std::string CriterionSpec::name() const {
  switch (kind) {
    case Kind::Plic:
      return "PLIC";
    case Kind::BicMf:
      return "BIC_MF";
    case Kind::Blic:
      break;
  }
  return blic_name(block, fixed_border);
}

CriterionSpec CriterionSpec::parse(std::string_view text) {
  text = trim(text);
  if (text == "PLIC") return {Kind::Plic, 1, true};
  if (text == "BIC_MF") return {Kind::BicMf, 1, true};
  const bool fixed = text.starts_with("BLIC_MF_");
  if (!fixed && !text.starts_with("BLIC_")) {
    throw ConfigError("unknown criterion '" + std::string(text) + "'");
  }
  const auto size = text.substr(fixed ? 8 : 5);
  const auto x = size.find('x');
  try {
    if (x == std::string_view::npos) throw std::invalid_argument("no x");
    const long long a = parse_integer(size.substr(0, x));
    const long long b = parse_integer(size.substr(x + 1));
    if (a != b || a < 1) throw std::invalid_argument("not square");
    return {Kind::Blic, static_cast<std::size_t>(a), fixed};
  } catch (const std::invalid_argument&) {
    throw ConfigError("criterion '" + std::string(text) + "' needs square blocks like BLIC_2x2");
  }
}

void ExperimentConfig::validate() const {
  if (height == 0 || width == 0) throw ConfigError("lattice dimensions must be positive");
  if (k_min < 2) throw ConfigError("k_min must be at least 2");
  if (k_max < k_min) throw ConfigError("k_max must not be below k_min");
  if (true_colors < 2) throw ConfigError("true_colors must be at least 2");
  if (!(noise_sd > 0.0)) throw ConfigError("noise_sd must be positive");
  if (true_psi < 0.0) throw ConfigError("true_psi must be non-negative");
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (systems.empty()) throw ConfigError("systems must list at least one graph");
  if (criteria.empty()) throw ConfigError("criteria must list at least one criterion");
  if (burnin < 1 || table_burnin < 1) throw ConfigError("burn-in must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  for (const auto& c : criteria) {
    const Block block{0, 0, std::min(c.block_size(), height), std::min(c.block_size(), width)};
    for (Neighborhood g : systems) {
      if (!recursion_feasible(block, g, k_max)) {
        throw ConfigError("criterion " + c.name() + " is too large for the recursion with K = " +
                          std::to_string(k_max) + " on " + std::string(to_string(g)));
      }
    }
  }
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "lattice") {
    const auto x = value.find('x');
    if (x == std::string_view::npos) throw ConfigError("lattice needs HEIGHTxWIDTH");
    c.height = parse_count(key, value.substr(0, x));
    c.width = parse_count(key, value.substr(x + 1));
  } else if (key == "height") {
    c.height = parse_count(key, value);
  } else if (key == "width") {
    c.width = parse_count(key, value);
  } else if (key == "true_system") {
    try {
      c.true_system = parse_neighborhood(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "true_colors") {
    c.true_colors = static_cast<int>(parse_count(key, value));
  } else if (key == "true_psi") {
    c.true_psi = parse_real(key, value);
  } else if (key == "noise_sd") {
    c.noise_sd = parse_real(key, value);
  } else if (key == "k_min") {
    c.k_min = static_cast<int>(parse_count(key, value));
  } else if (key == "k_max") {
    c.k_max = static_cast<int>(parse_count(key, value));
  } else if (key == "systems") {
    c.systems.clear();
    for (auto part : split(value, ',')) {
      try {
        c.systems.push_back(parse_neighborhood(trim(part)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  } else if (key == "criteria") {
    c.criteria.clear();
    for (auto part : split(value, ',')) c.criteria.push_back(CriterionSpec::parse(part));
  } else if (key == "replicates") {
    c.replicates = parse_count(key, value);
  } else if (key == "em_iterations") {
    c.em_iterations = parse_count(key, value);
  } else if (key == "icm_iterations") {
    c.icm_iterations = parse_count(key, value);
  } else if (key == "icm_sweeps") {
    c.icm_sweeps = parse_count(key, value);
  } else if (key == "burnin") {
    c.burnin = parse_count(key, value);
  } else if (key == "test_size") {
    c.test_size = parse_count(key, value);
  } else if (key == "table_size") {
    c.table_size = parse_count(key, value);
  } else if (key == "knn_k") {
    c.knn_k = parse_count(key, value);
  } else if (key == "table_burnin") {
    c.table_burnin = parse_count(key, value);
  } else if (key == "prior_g4") {
    c.priors.g4 = parse_prior(key, value);
  } else if (key == "prior_g8") {
    c.priors.g8 = parse_prior(key, value);
  } else if (key == "seed") {
    c.seed = parse_count(key, value);
  } else if (key == "output") {
    c.output_dir = std::string(value);
  } else if (key == "threads") {
    c.threads = parse_count(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(base, text.substr(0, eq), text.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "lattice = " << c.height << 'x' << c.width << '\n'
      << "true_system = " << to_string(c.true_system) << '\n'
      << "true_colors = " << c.true_colors << '\n'
      << "true_psi = " << format_double(c.true_psi) << '\n'
      << "noise_sd = " << format_double(c.noise_sd) << '\n'
      << "k_min = " << c.k_min << '\n'
      << "k_max = " << c.k_max << '\n'
      << "systems = " << join_systems(c.systems) << '\n'
      << "criteria = ";
  for (std::size_t i = 0; i < c.criteria.size(); ++i) {
    out << (i > 0 ? ", " : "") << c.criteria[i].name();
  }
  out << '\n'
      << "replicates = " << c.replicates << '\n'
      << "em_iterations = " << c.em_iterations << '\n'
      << "icm_iterations = " << c.icm_iterations << '\n'
      << "icm_sweeps = " << c.icm_sweeps << '\n'
      << "burnin = " << c.burnin << '\n'
      << "test_size = " << c.test_size << '\n'
      << "table_size = " << c.table_size << '\n'
      << "knn_k = " << c.knn_k << '\n'
      << "table_burnin = " << c.table_burnin << '\n'
      << "prior_g4 = " << format_double(c.priors.g4.lower) << ", "
      << format_double(c.priors.g4.upper) << '\n'
      << "prior_g8 = " << format_double(c.priors.g8.lower) << ", "
      << format_double(c.priors.g8.upper) << '\n'
      << "seed = " << c.seed << '\n';
  return out.str();
}

}  // namespace blic::harness
