#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "causalkit/error.hpp"

namespace causalkit {

enum class ColumnKind { Binary, Continuous };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  std::vector<double> values;
};

/// Rectangular sample table with named columns. Binary columns hold only 0/1.
class Dataset {
 public:
  Dataset() = default;

  void add_column(std::string name, ColumnKind kind, std::vector<double> values) {
    if (index_.count(name)) throw Error(Errc::InvalidArgument, "duplicate column '" + name + "'");
    if (!columns_.empty() && values.size() != rows()) {
      throw Error(Errc::LengthMismatch, "column '" + name + "' has " + std::to_string(values.size()) +
                                            " rows, expected " + std::to_string(rows()));
    }
    if (kind == ColumnKind::Binary) {
      for (double v : values) {
        if (v != 0.0 && v != 1.0) throw Error(Errc::InvalidArgument, "binary column '" + name + "' holds " + std::to_string(v));
      }
    }
    index_[name] = columns_.size();
    columns_.push_back({std::move(name), kind, std::move(values)});
  }

  std::size_t rows() const { return columns_.empty() ? 0 : columns_.front().values.size(); }
  std::size_t cols() const { return columns_.size(); }
  bool has(const std::string& name) const { return index_.count(name) != 0; }

  const Column& column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error(Errc::UnknownColumn, "'" + name + "'");
    return columns_[it->second];
  }

  const std::vector<double>& values(const std::string& name) const { return column(name).values; }
  const std::vector<Column>& columns() const { return columns_; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& c : columns_) out.push_back(c.name);
    return out;
  }

  const std::vector<double>& require_binary(const std::string& name) const {
    const auto& c = column(name);
    if (c.kind != ColumnKind::Binary) throw Error(Errc::InvalidArgument, "column '" + name + "' is not binary");
    return c.values;
  }

  /// Rows picked by index (with repetition), used by the bootstrap.
  Dataset take(const std::vector<std::size_t>& rows) const {
    Dataset out;
    for (const auto& c : columns_) {
      std::vector<double> v(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) v[i] = c.values[rows[i]];
      out.index_[c.name] = out.columns_.size();
      out.columns_.push_back({c.name, c.kind, std::move(v)});
    }
    return out;
  }

  /// Keeps only the listed columns, in the listed order.
  Dataset select(const std::vector<std::string>& keep) const {
    Dataset out;
    for (const auto& name : keep) {
      const auto& c = column(name);
      out.add_column(c.name, c.kind, c.values);
    }
    return out;
  }

 private:
  std::vector<Column> columns_;
  std::map<std::string, std::size_t> index_;
};

/// Shortest round-trip decimal representation.
inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void write_csv(std::ostream& os, const Dataset& data) {
  const auto& cols = data.columns();
  for (std::size_t j = 0; j < cols.size(); ++j) os << (j ? "," : "") << cols[j].name;
  os << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (j) os << ',';
      const double v = cols[j].values[i];
      if (cols[j].kind == ColumnKind::Binary) {
        os << (v != 0.0 ? '1' : '0');
      } else {
        os << format_number(v);
      }
    }
    os << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// Columns whose every value is 0 or 1 are read back as binary.
inline Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "empty CSV input");
  const auto header = detail::split_csv_line(line);
  std::vector<std::vector<double>> values(header.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(header.size()) + " fields");
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0;
      const auto& f = fields[j];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad number '" + f + "'");
      }
      values[j].push_back(v);
    }
  }
  if (values.empty() || values.front().empty()) throw Error(Errc::ParseError, "CSV has no data rows");
  Dataset data;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const bool binary = std::all_of(values[j].begin(), values[j].end(),
                                    [](double v) { return v == 0.0 || v == 1.0; });
    data.add_column(header[j], binary ? ColumnKind::Binary : ColumnKind::Continuous, std::move(values[j]));
  }
  return data;
}

inline Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  return read_csv(in);
}

/// Packs the listed binary columns of row `i` into an integer key, first
/// column in bit 0. At most 62 columns.
inline std::uint64_t stratum_key(const std::vector<const std::vector<double>*>& cols, std::size_t i) {
  std::uint64_t key = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if ((*cols[j])[i] != 0.0) key |= (std::uint64_t{1} << j);
  }
  return key;
}

inline std::vector<const std::vector<double>*> binary_columns(const Dataset& data,
                                                              const std::vector<std::string>& names) {
  if (names.size() > 62) throw Error(Errc::InvalidArgument, "too many stratification columns");
  std::vector<const std::vector<double>*> out;
  for (const auto& n : names) out.push_back(&data.require_binary(n));
  return out;
}

}  // namespace causalkit
