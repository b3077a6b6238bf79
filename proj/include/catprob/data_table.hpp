#pragma once

#include <catprob/channel.hpp>
#include <catprob/error.hpp>
#include <catprob/space.hpp>

#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace catprob {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto p = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, p == std::string_view::npos ? std::string_view::npos : p - pos)));
    if (p == std::string_view::npos) break;
    pos = p + 1;
  }
  return out;
}

inline std::optional<double> parse_real(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Header cell "Name" or "Name{a|b|c}" (declared label order).
struct HeaderCell {
  std::string name;
  std::optional<std::vector<std::string>> labels;
};

inline HeaderCell parse_header_cell(const std::string& cell, std::size_t column) {
  const auto brace = cell.find('{');
  if (brace == std::string::npos) {
    if (cell.empty()) throw ValidationError("header column " + std::to_string(column) + " has no name");
    return {cell, std::nullopt};
  }
  if (cell.back() != '}') throw ValidationError("header column " + std::to_string(column) + ": unterminated label list");
  HeaderCell h{trim(cell.substr(0, brace)), split(std::string_view(cell).substr(brace + 1, cell.size() - brace - 2), '|')};
  if (h.name.empty()) throw ValidationError("header column " + std::to_string(column) + " has no name");
  return h;
}

struct RawTable {
  std::vector<HeaderCell> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
};

/// Comma-separated cells, first non-comment line is the header; blank lines and '#' lines are skipped.
inline RawTable read_raw(std::istream& in, const std::string& source) {
  RawTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto cells = split(s, ',');
    if (!have_header) {
      for (std::size_t i = 0; i < cells.size(); ++i) t.header.push_back(parse_header_cell(cells[i], i + 1));
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ValidationError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                            " cells, got " + std::to_string(cells.size()));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].empty()) {
        throw ValidationError(source + ":" + std::to_string(lineno) + ": empty cell in column '" + t.header[i].name + "'");
      }
    }
    t.rows.push_back(std::move(cells));
    t.lines.push_back(lineno);
  }
  if (!have_header) throw ValidationError(source + ": empty file (no header row)");
  if (t.rows.empty()) throw ValidationError(source + ": no data rows");
  return t;
}

inline Space column_space(const RawTable& t, std::size_t col, const std::string& source) {
  const auto& h = t.header[col];
  if (h.labels) {
    Space s(h.name, *h.labels);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (!s.find(t.rows[r][col])) {
        throw ValidationError(source + ":" + std::to_string(t.lines[r]) + ": label '" + t.rows[r][col] +
                              "' not declared for column '" + h.name + "'");
      }
    }
    return s;
  }
  std::vector<std::string> labels;
  for (const auto& row : t.rows) {
    bool seen = false;
    for (const auto& l : labels) seen = seen || l == row[col];
    if (!seen) labels.push_back(row[col]);
  }
  return Space(h.name, std::move(labels));
}

}  // namespace detail

struct Column {
  std::string name;
  Space space;
  bool numeric = false;
};

/// Rectangular table of labels; each column carries the space of its values.
class DataTable {
 public:
  DataTable(std::vector<Column> columns, std::vector<std::vector<std::string>> rows)
      : columns_(std::move(columns)), rows_(std::move(rows)) {
    if (rows_.empty()) throw ValidationError("data table has no rows");
    for (const auto& r : rows_) {
      if (r.size() != columns_.size()) throw ValidationError("data table is not rectangular");
      for (std::size_t c = 0; c < r.size(); ++c) columns_[c].space.index_of(r[c]);
    }
  }

  std::span<const Column> columns() const noexcept { return columns_; }
  std::span<const std::vector<std::string>> rows() const noexcept { return rows_; }
  const Column& column(std::size_t i) const { return columns_.at(i); }

  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i].name == name) return i;
    }
    throw ValidationError("no column named '" + std::string(name) + "'");
  }

  ProductSpace space() const {
    std::vector<Space> f;
    for (const auto& c : columns_) f.push_back(c.space);
    return ProductSpace(std::move(f));
  }

  /// Uniform empirical state: each row carries mass 1/N.
  State state() const { return state_from_rows(space(), rows_); }

  /// Numeric cell values of a column, row by row.
  std::vector<double> values(std::size_t col) const {
    if (!columns_.at(col).numeric) throw ValidationError("column '" + columns_[col].name + "' is not numeric");
    std::vector<double> v;
    v.reserve(rows_.size());
    for (const auto& r : rows_) v.push_back(*detail::parse_real(r[col]));
    return v;
  }

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<std::string>> rows_;
};

inline DataTable read_table(std::istream& in, const std::string& source = "<input>") {
  auto raw = detail::read_raw(in, source);
  std::vector<Column> cols;
  for (std::size_t c = 0; c < raw.header.size(); ++c) {
    bool numeric = !raw.header[c].labels.has_value();
    bool any_numeric = false;
    for (const auto& row : raw.rows) {
      const bool is_num = detail::parse_real(row[c]).has_value();
      numeric = numeric && is_num;
      any_numeric = any_numeric || is_num;
    }
    if (!raw.header[c].labels && any_numeric && !numeric) {
      throw ValidationError(source + ": column '" + raw.header[c].name + "' mixes numeric and symbolic cells");
    }
    cols.push_back({raw.header[c].name, detail::column_space(raw, c, source), numeric});
  }
  return DataTable(std::move(cols), std::move(raw.rows));
}

inline DataTable ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return read_table(in, path.string());
}

/// Explicit joint state: label columns followed by a final "weight" column.
/// Repeated tuples accumulate; unlisted tuples have weight zero.
inline State read_weighted_state(std::istream& in, const std::string& source = "<input>") {
  auto raw = detail::read_raw(in, source);
  if (raw.header.size() < 2 || raw.header.back().name != "weight") {
    throw ValidationError(source + ": weighted state needs label columns and a final 'weight' column");
  }
  const std::size_t n = raw.header.size() - 1;
  std::vector<Space> f;
  for (std::size_t c = 0; c < n; ++c) f.push_back(detail::column_space(raw, c, source));
  const ProductSpace sp(std::move(f));
  std::vector<double> w(sp.size(), 0.0);
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& row = raw.rows[r];
    const auto v = detail::parse_real(row[n]);
    if (!v || *v < 0.0) {
      throw ValidationError(source + ":" + std::to_string(raw.lines[r]) + ": weight '" + row[n] +
                            "' is not a nonnegative number");
    }
    w[sp.index_of(std::span<const std::string>(row.data(), n))] += *v;
  }
  return State(sp, std::move(w));
}

inline bool is_weighted_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::string line;
  while (std::getline(in, line)) {
    const auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto cells = detail::split(s, ',');
    return cells.size() >= 2 && cells.back() == "weight";
  }
  return false;
}

/// A joint state from either a weighted state file or a data table.
inline State load_state(const std::filesystem::path& path) {
  if (is_weighted_state_file(path)) {
    std::ifstream in(path);
    return read_weighted_state(in, path.string());
  }
  return ingest_csv(path).state();
}

}  // namespace catprob
