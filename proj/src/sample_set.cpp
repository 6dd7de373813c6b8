#include "tenreg/sample_set.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "tenreg/io_util.hpp"

namespace tenreg {

bool SampleSet::row_labeled(int i) const { return !std::isnan(outputs[i]); }

bool SampleSet::fully_labeled() const {
  for (int i = 0; i < size(); ++i)
    if (!row_labeled(i)) return false;
  return size() > 0;
}

std::vector<int> SampleSet::unlabeled_rows() const {
  std::vector<int> rows;
  for (int i = 0; i < size(); ++i)
    if (!row_labeled(i)) rows.push_back(i);
  return rows;
}

SampleSet SampleSet::from_unit(const ParameterSpace& space,
                               const Eigen::MatrixXd& unit) {
  SampleSet s;
  s.unit_points = unit;
  s.phys_points = space.inverse_transform_rows(unit);
  s.outputs = Eigen::VectorXd::Constant(unit.rows(),
                                        std::numeric_limits<double>::quiet_NaN());
  return s;
}

void SampleSet::append(const SampleSet& other) {
  if (size() == 0) {
    *this = other;
    return;
  }
  if (other.dim() != dim()) throw DomainError("SampleSet::append: dimension mismatch");
  const int n0 = size();
  const int n1 = other.size();
  unit_points.conservativeResize(n0 + n1, Eigen::NoChange);
  phys_points.conservativeResize(n0 + n1, Eigen::NoChange);
  outputs.conservativeResize(n0 + n1);
  unit_points.bottomRows(n1) = other.unit_points;
  phys_points.bottomRows(n1) = other.phys_points;
  outputs.tail(n1) = other.outputs;
}

void write_sample_csv(const SampleSet& set, const std::string& path) {
  const int d = set.dim();
  std::ostringstream out;
  for (int k = 0; k < d; ++k) out << "u_" << (k + 1) << ",";
  for (int k = 0; k < d; ++k) out << "x_" << (k + 1) << ",";
  out << "y\n";
  for (int i = 0; i < set.size(); ++i) {
    for (int k = 0; k < d; ++k) out << format_double(set.unit_points(i, k)) << ",";
    for (int k = 0; k < d; ++k) out << format_double(set.phys_points(i, k)) << ",";
    if (set.row_labeled(i)) out << format_double(set.outputs[i]);
    out << "\n";
  }
  write_file_atomic(path, out.str());
}

namespace {
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}
} // namespace

SampleSet read_sample_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError(path + ": empty sample file");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header.back() != "y" || (header.size() - 1) % 2 != 0)
    throw ConfigError(path + ": malformed sample header");
  const int d = static_cast<int>((header.size() - 1) / 2);

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != 2 * d + 1)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(2 * d + 1) + " fields, got " +
                        std::to_string(fields.size()));
    std::vector<double> row(2 * d + 1);
    for (int j = 0; j < 2 * d; ++j) {
      char* end = nullptr;
      row[j] = std::strtod(fields[j].c_str(), &end);
      if (end == fields[j].c_str())
        throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" +
                          fields[j] + "'");
    }
    if (fields[2 * d].empty()) {
      row[2 * d] = std::numeric_limits<double>::quiet_NaN();
    } else {
      char* end = nullptr;
      row[2 * d] = std::strtod(fields[2 * d].c_str(), &end);
      if (end == fields[2 * d].c_str())
        throw ConfigError(path + ":" + std::to_string(lineno) + ": bad output '" +
                          fields[2 * d] + "'");
    }
    rows.push_back(std::move(row));
  }

  SampleSet s;
  const int n = static_cast<int>(rows.size());
  s.unit_points.resize(n, d);
  s.phys_points.resize(n, d);
  s.outputs.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      s.unit_points(i, k) = rows[i][k];
      s.phys_points(i, k) = rows[i][d + k];
    }
    s.outputs[i] = rows[i][2 * d];
  }
  return s;
}

} // namespace tenreg
