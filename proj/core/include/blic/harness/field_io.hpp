#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "blic/grid.hpp"

namespace blic::harness {

/// Malformed field file; the message names the offending line.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabelField {
  Lattice lattice{1, 1};
  int num_colors = 2;
  std::vector<int> labels;
};

struct ObservationField {
  Lattice lattice{1, 1};
  std::vector<double> values;
};

// Text formats, rows of the lattice one per line:
//   labels:       "h w K" then h lines of w integers in [0, K)
//   observations: "h w"   then h lines of w decimals
void write_labels(std::ostream& out, const LabelField& field);
LabelField read_labels(std::istream& in);
void write_observation(std::ostream& out, const ObservationField& field);
ObservationField read_observation(std::istream& in);

LabelField load_labels(const std::string& path);
ObservationField load_observation(const std::string& path);
void save_labels(const std::string& path, const LabelField& field);
void save_observation(const std::string& path, const ObservationField& field);

}  // namespace blic::harness
