#include "featprop/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace featprop {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw InputError(path + ":" + std::to_string(line) + ": " + msg);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool is_missing_cell(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  s = s.substr(i);
  if (s.empty()) return true;
  return s == "nan" || s == "NaN" || s == "NAN";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::vector<Edge> load_edge_list(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    long long a = -1, b = -1;
    if (!(ss >> a >> b) || a < 0 || b < 0)
      fail(path, lineno, "expected two non-negative node ids");
    std::string rest;
    if (ss >> rest) fail(path, lineno, "trailing content '" + rest + "'");
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  return edges;
}

std::pair<FeatureMatrix, KnownMask> load_features_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "node")
    fail(path, 1, "expected header starting with 'node'");
  const std::size_t d = header.size() - 1;
  if (d == 0) fail(path, 1, "no feature columns");

  std::vector<double> values;
  std::vector<std::uint8_t> known;
  std::size_t lineno = 1, expect = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != d + 1)
      fail(path, lineno, "expected " + std::to_string(d + 1) + " cells, got " +
                             std::to_string(cells.size()));
    std::size_t node = 0;
    try {
      node = std::stoul(cells[0]);
    } catch (...) {
      fail(path, lineno, "bad node id '" + cells[0] + "'");
    }
    if (node != expect)
      fail(path, lineno, "expected node " + std::to_string(expect) + ", got " +
                             std::to_string(node));
    ++expect;
    for (std::size_t c = 1; c <= d; ++c) {
      if (is_missing_cell(cells[c])) {
        values.push_back(0.0);
        known.push_back(0);
      } else {
        try {
          values.push_back(std::stod(cells[c]));
        } catch (...) {
          fail(path, lineno, "bad value '" + cells[c] + "'");
        }
        known.push_back(1);
      }
    }
  }
  if (expect == 0) throw InputError(path + ": no data rows");

  FeatureMatrix x(expect, d);
  x.values = std::move(values);
  KnownMask m(expect, d);
  m.known = std::move(known);
  return {std::move(x), std::move(m)};
}

KnownMask load_mask_csv(const std::string& path) {
  auto [x, implied] = load_features_csv(path);
  KnownMask m(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t c = 0; c < x.cols; ++c) {
      if (!implied(i, c) || (x(i, c) != 0.0 && x(i, c) != 1.0))
        throw InputError(path + ": mask cells must be 0 or 1 (node " + std::to_string(i) +
                         ")");
      m.set(i, c, x(i, c) == 1.0);
    }
  return m;
}

LabelVector load_labels_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  if (split_csv(line) != std::vector<std::string>{"node", "label"})
    fail(path, 1, "expected header 'node,label'");
  LabelVector y;
  std::size_t lineno = 1, expect = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) fail(path, lineno, "expected 'node,label'");
    long long node = -1, label = -2;
    try {
      node = std::stoll(cells[0]);
      label = std::stoll(cells[1]);
    } catch (...) {
      fail(path, lineno, "bad integer");
    }
    if (node != static_cast<long long>(expect))
      fail(path, lineno, "expected node " + std::to_string(expect));
    if (label < -1) fail(path, lineno, "labels must be >= -1");
    ++expect;
    y.labels.push_back(static_cast<int>(label));
    y.num_classes = std::max(y.num_classes, static_cast<int>(label) + 1);
  }
  if (expect == 0) throw InputError(path + ": no data rows");
  return y;
}

void write_features_csv(const std::string& path, const FeatureMatrix& x) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "node";
  for (std::size_t c = 0; c < x.cols; ++c) out << ",f" << c;
  out << "\n";
  for (std::size_t i = 0; i < x.rows; ++i) {
    out << i;
    for (std::size_t c = 0; c < x.cols; ++c) out << "," << fmt(x(i, c));
    out << "\n";
  }
}

void write_report_csv(const std::string& rows_path, const std::string& agg_path,
                      const EvalReport& report, bool include_seconds) {
  {
    std::ofstream out(rows_path);
    if (!out) throw InputError("cannot write '" + rows_path + "'");
    out << "method,missing_rate,run,rmse,energy,accuracy";
    if (include_seconds) out << ",seconds";
    out << "\n";
    for (const auto& r : report.rows) {
      out << r.method << "," << fmt_short(r.missing_rate) << "," << r.run << ","
          << fmt_short(r.rmse) << "," << fmt_short(r.energy) << ","
          << fmt_short(r.accuracy);
      if (include_seconds) out << "," << fmt_short(r.seconds);
      out << "\n";
    }
  }
  {
    std::ofstream out(agg_path);
    if (!out) throw InputError("cannot write '" + agg_path + "'");
    out << "method,missing_rate,accuracy_mean,accuracy_stderr,rmse_mean,energy_mean";
    if (include_seconds) out << ",seconds_mean";
    out << "\n";
    for (const auto& a : report.aggregates) {
      out << a.method << "," << fmt_short(a.missing_rate) << ","
          << fmt_short(a.accuracy_mean) << "," << fmt_short(a.accuracy_stderr) << ","
          << fmt_short(a.rmse_mean) << "," << fmt_short(a.energy_mean);
      if (include_seconds) out << "," << fmt_short(a.seconds_mean);
      out << "\n";
    }
  }
}

void write_spectrum_csv(const std::string& path, const std::vector<double>& eigenvalues,
                        const std::vector<std::string>& column_names,
                        const std::vector<std::vector<double>>& columns) {
  if (column_names.size() != columns.size())
    throw InputError("write_spectrum_csv: name/column count mismatch");
  for (const auto& col : columns)
    if (col.size() != eigenvalues.size())
      throw InputError("write_spectrum_csv: column length mismatch");
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "eigenvalue";
  for (const auto& name : column_names) out << "," << name;
  out << "\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    out << fmt(eigenvalues[i]);
    for (const auto& col : columns) out << "," << fmt(col[i]);
    out << "\n";
  }
}

}  // namespace featprop
