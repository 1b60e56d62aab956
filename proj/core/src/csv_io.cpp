#include "egmgeom/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace egmgeom {

namespace {

double parse_double(const std::string& tok, const std::string& path, long line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0') || errno == ERANGE) {
    throw InvalidInputError(path + ":" + std::to_string(line) +
                            ": cannot parse '" + tok + "' as a number");
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

struct RawCsv {
  std::vector<std::vector<double>> rows;
  std::optional<std::size_t> declared_dim;
};

RawCsv read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open '" + path + "' for reading");
  RawCsv raw;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      std::size_t eq = line.find("d=", start);
      if (eq != std::string::npos && !raw.declared_dim) {
        const long d = std::strtol(line.c_str() + eq + 2, nullptr, 10);
        if (d >= 1) raw.declared_dim = static_cast<std::size_t>(d);
      }
      continue;
    }
    std::vector<double> row;
    for (const auto& tok : split_commas(line.substr(start))) {
      row.push_back(parse_double(tok, path, lineno));
    }
    if (!raw.rows.empty() && row.size() != raw.rows.front().size()) {
      throw InvalidInputError(path + ":" + std::to_string(lineno) +
                              ": ragged row (got " + std::to_string(row.size()) +
                              " columns)");
    }
    raw.rows.push_back(std::move(row));
  }
  if (raw.rows.empty()) throw InvalidInputError(path + ": no data rows");
  return raw;
}

void check_declared_dim(const RawCsv& raw, std::size_t actual,
                        const std::string& path) {
  if (raw.declared_dim && *raw.declared_dim != actual) {
    throw InvalidInputError(path + ": header declares d=" +
                            std::to_string(*raw.declared_dim) + " but rows have d=" +
                            std::to_string(actual));
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open '" + path + "' for writing");
  return out;
}

void write_value(std::ofstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

PointSet read_points_csv(const std::string& path) {
  RawCsv raw = read_rows(path);
  check_declared_dim(raw, raw.rows.front().size(), path);
  return PointSet::from_rows(raw.rows);
}

void write_points_csv(const std::string& path, const PointSet& ps) {
  std::ofstream out = open_out(path);
  out << "# d=" << ps.dim() << "\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto p = ps.point(i);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j) out << ",";
      write_value(out, p[j]);
    }
    out << "\n";
  }
}

LabeledDataset read_labeled_csv(const std::string& path) {
  RawCsv raw = read_rows(path);
  const std::size_t cols = raw.rows.front().size();
  if (cols < 2) {
    throw InvalidInputError(path + ": labeled rows need at least one coordinate "
                            "and a label column");
  }
  check_declared_dim(raw, cols - 1, path);
  std::vector<std::vector<double>> pts;
  std::vector<int> labels;
  pts.reserve(raw.rows.size());
  for (auto& row : raw.rows) {
    const double y = row.back();
    if (y != 1.0 && y != -1.0) {
      throw InvalidInputError(path + ": label column must be +1 or -1");
    }
    labels.push_back(static_cast<int>(y));
    row.pop_back();
    pts.push_back(std::move(row));
  }
  return LabeledDataset(PointSet::from_rows(pts), std::move(labels));
}

void write_labeled_csv(const std::string& path, const LabeledDataset& ds) {
  std::ofstream out = open_out(path);
  out << "# d=" << ds.points().dim() << "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto p = ds.points().point(i);
    for (double x : p) {
      write_value(out, x);
      out << ",";
    }
    out << (ds.labels()[i] > 0 ? "+1" : "-1") << "\n";
  }
}

PolytopeShape read_shape_csv(const std::string& path) {
  RawCsv raw = read_rows(path);
  const std::size_t cols = raw.rows.front().size();
  if (cols < 2) {
    throw InvalidInputError(path + ": shape rows need d normal coordinates "
                            "followed by the offset");
  }
  check_declared_dim(raw, cols - 1, path);
  std::vector<std::vector<double>> normals;
  std::vector<double> offsets;
  for (auto& row : raw.rows) {
    offsets.push_back(row.back());
    row.pop_back();
    normals.push_back(std::move(row));
  }
  return PolytopeShape(std::move(normals), std::move(offsets));
}

void write_shape_csv(const std::string& path, const PolytopeShape& shape) {
  std::ofstream out = open_out(path);
  out << "# d=" << shape.dim() << "\n";
  for (std::size_t i = 0; i < shape.faces(); ++i) {
    for (double w : shape.normal(i)) {
      write_value(out, w);
      out << ",";
    }
    write_value(out, shape.offset(i));
    out << "\n";
  }
}

}  // namespace egmgeom
