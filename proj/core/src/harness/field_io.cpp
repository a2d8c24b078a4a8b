#include "blic/harness/field_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "blic/format.hpp"

namespace blic::harness {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError("line " + std::to_string(line) + ": " + what);
}

template <class Parse>
void read_rows(std::istream& in, const Lattice& lattice, std::size_t& line_no, Parse&& parse) {
  std::string line;
  std::size_t row = 0;
  while (row < lattice.height()) {
    if (!std::getline(in, line)) fail(line_no + 1, "expected " + std::to_string(lattice.height()) + " rows");
    ++line_no;
    const auto cells = split_whitespace(line);
    if (cells.empty()) continue;
    if (cells.size() != lattice.width()) {
      fail(line_no, "expected " + std::to_string(lattice.width()) + " entries, found " +
                        std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) parse(lattice.index(row, c), cells[c]);
    ++row;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) fail(line_no, "unexpected data after the last row");
  }
}

std::vector<long long> read_header(std::istream& in, std::size_t expected, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cells = split_whitespace(line);
    if (cells.empty()) continue;
    if (cells.size() != expected) fail(line_no, "malformed header");
    std::vector<long long> out;
    for (auto c : cells) {
      try {
        out.push_back(parse_integer(c));
      } catch (const std::invalid_argument&) {
        fail(line_no, "malformed header");
      }
      if (out.back() <= 0) fail(line_no, "header values must be positive");
    }
    return out;
  }
  fail(line_no + 1, "missing header");
}

template <class T, class Write>
void save(const std::string& path, const T& field, Write&& write) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write(out, field);
}

}  // namespace

void write_labels(std::ostream& out, const LabelField& f) {
  out << f.lattice.height() << ' ' << f.lattice.width() << ' ' << f.num_colors << '\n';
  for (std::size_t r = 0; r < f.lattice.height(); ++r) {
    for (std::size_t c = 0; c < f.lattice.width(); ++c) {
      out << (c > 0 ? " " : "") << f.labels[f.lattice.index(r, c)];
    }
    out << '\n';
  }
}

LabelField read_labels(std::istream& in) {
  std::size_t line_no = 0;
  const auto header = read_header(in, 3, line_no);
  LabelField f;
  f.lattice = Lattice(static_cast<std::size_t>(header[0]), static_cast<std::size_t>(header[1]));
  f.num_colors = static_cast<int>(header[2]);
  f.labels.assign(f.lattice.size(), 0);
  read_rows(in, f.lattice, line_no, [&](Site i, std::string_view cell) {
    long long v = 0;
    try {
      v = parse_integer(cell);
    } catch (const std::invalid_argument&) {
      fail(line_no, "not an integer: '" + std::string(cell) + "'");
    }
    if (v < 0 || v >= f.num_colors) fail(line_no, "color " + std::string(cell) + " out of range");
    f.labels[i] = static_cast<int>(v);
  });
  return f;
}

void write_observation(std::ostream& out, const ObservationField& f) {
  out << f.lattice.height() << ' ' << f.lattice.width() << '\n';
  for (std::size_t r = 0; r < f.lattice.height(); ++r) {
    for (std::size_t c = 0; c < f.lattice.width(); ++c) {
      out << (c > 0 ? " " : "") << format_double(f.values[f.lattice.index(r, c)]);
    }
    out << '\n';
  }
}

ObservationField read_observation(std::istream& in) {
  std::size_t line_no = 0;
  const auto header = read_header(in, 2, line_no);
  ObservationField f;
  f.lattice = Lattice(static_cast<std::size_t>(header[0]), static_cast<std::size_t>(header[1]));
  f.values.assign(f.lattice.size(), 0.0);
  read_rows(in, f.lattice, line_no, [&](Site i, std::string_view cell) {
    try {
      f.values[i] = parse_double(cell);
    } catch (const std::invalid_argument&) {
      fail(line_no, "not a number: '" + std::string(cell) + "'");
    }
  });
  return f;
}

LabelField load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_labels(in);
}

ObservationField load_observation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_observation(in);
}

void save_labels(const std::string& path, const LabelField& field) {
  save(path, field, [](std::ostream& o, const LabelField& f) { write_labels(o, f); });
}

void save_observation(const std::string& path, const ObservationField& field) {
  save(path, field, [](std::ostream& o, const ObservationField& f) { write_observation(o, f); });
}

}  // namespace blic::harness
