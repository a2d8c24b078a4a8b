#include "blic/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "blic/potts.hpp"

namespace blic {

double block_incomplete_loglik(std::span<const double> y, const BlockPartition& partition,
                               const std::vector<int>* reference, const HiddenPottsParams& theta,
                               const CandidateModel& model) {
  const Lattice& lattice = partition.lattice();
  const int K = model.num_colors;
  if (y.size() != lattice.size()) throw std::invalid_argument("observation does not match the lattice");
  if (theta.num_colors() != K) throw std::invalid_argument("parameters do not match the model");
  const bool fixed = partition.border_mode() == BorderMode::FixedField;
  if (fixed != (reference != nullptr)) {
    throw std::invalid_argument("a reference field is required exactly when borders are fixed");
  }
  if (fixed) {
    if (reference->size() != lattice.size()) throw std::invalid_argument("reference field size mismatch");
    for (int c : *reference) {
      if (c < 0 || c >= K) throw std::invalid_argument("reference color out of range");
    }
  }

  const PottsSpec spec{lattice, model.system, K, theta.psi};
  SitePotentials evidence(lattice.size(), K);
  for (Site i = 0; i < lattice.size(); ++i) {
    for (int k = 0; k < K; ++k) evidence(i, k) = log_emission(y[i], k, theta.emission);
  }

  // Without borders the prior normalizer only depends on the block shape.
  std::map<std::pair<std::size_t, std::size_t>, double> prior_cache;
  double total = 0.0;
  for (const Block& block : partition.blocks()) {
    if (fixed) {
      const auto border = BorderCondition::from_field(lattice, block, model.system, *reference);
      total += log_partition_recursive(spec, block, &evidence, &border) -
               log_partition_recursive(spec, block, nullptr, &border);
      continue;
    }
    const auto shape = std::make_pair(block.height, block.width);
    auto it = prior_cache.find(shape);
    if (it == prior_cache.end()) {
      it = prior_cache.emplace(shape, log_partition_recursive(spec, block)).first;
    }
    total += log_partition_recursive(spec, block, &evidence) - it->second;
  }
  return total;
}

std::string blic_name(std::size_t b, bool fixed_border) {
  const std::string size = std::to_string(b) + "x" + std::to_string(b);
  return fixed_border ? "BLIC_MF_" + size : "BLIC_" + size;
}

CriterionValue blic(std::span<const double> y, const Lattice& lattice, std::size_t b,
                    const HiddenPottsParams& theta, const CandidateModel& model,
                    const std::vector<int>* reference) {
  const bool fixed = reference != nullptr;
  const auto partition =
      regular_partition(lattice, b, fixed ? BorderMode::FixedField : BorderMode::Empty);
  CriterionValue out;
  out.model = model;
  out.name = blic_name(b, fixed);
  out.free_parameters = free_parameters(model.num_colors);
  out.block_loglik = block_incomplete_loglik(y, partition, reference, theta, model);
  out.value = -2.0 * out.block_loglik +
              out.free_parameters * std::log(static_cast<double>(lattice.size()));
  out.theta = theta;
  return out;
}

CriterionValue plic(std::span<const double> y, const Lattice& lattice,
                    const CandidateModel& model, const FitResult& icm) {
  CriterionValue v = blic(y, lattice, 1, icm.theta, model, &icm.segmentation);
  v.name = "PLIC";
  return v;
}

CriterionValue bic_mf_like(std::span<const double> y, const Lattice& lattice,
                           const CandidateModel& model, const FitResult& em) {
  CriterionValue v = blic(y, lattice, 1, em.theta, model, &em.segmentation);
  v.name = "BIC_MF";
  return v;
}

std::vector<double> delta_curve(std::span<const CriterionValue> values) {
  if (values.empty()) return {};
  std::vector<const CriterionValue*> sorted;
  for (const auto& v : values) {
    if (v.name != values.front().name || v.model.system != values.front().model.system) {
      throw std::invalid_argument("delta curve mixes criteria or graphs");
    }
    sorted.push_back(&v);
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->model.num_colors < b->model.num_colors;
  });
  std::vector<double> out;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->model.num_colors != sorted[i - 1]->model.num_colors + 1) {
      throw std::invalid_argument("delta curve needs a contiguous range of K");
    }
    out.push_back(sorted[i]->value - sorted[i - 1]->value);
  }
  return out;
}

CandidateModel select_model(std::span<const CriterionValue> values) {
  if (values.empty()) throw std::invalid_argument("no candidate to select from");
  const CriterionValue* best = &values.front();
  auto rank = [](const CandidateModel& m) {
    return std::make_pair(m.num_colors, m.system == Neighborhood::G4 ? 0 : 1);
  };
  for (const auto& v : values.subspan(1)) {
    if (v.value < best->value || (v.value == best->value && rank(v.model) < rank(best->model))) {
      best = &v;
    }
  }
  return best->model;
}

}  // namespace blic
