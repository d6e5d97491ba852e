#pragma once

// Tabular reports: CSV with trailing '#' comment lines, or JSON
// {"columns": [...], "data": [[...]], "comments": [...]}.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "oscint/error.hpp"

namespace oscint {

using Cell = std::variant<bool, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> comments;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw Error(ErrorKind::InvalidInput, "row width does not match the header");
    rows.push_back(std::move(row));
  }

  friend bool operator==(const Table&, const Table&) = default;
};

enum class Format { csv, json };

/// Shortest round-trip representation, always with '.' or an exponent.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline bool looks_numeric_or_bool(std::string_view s) {
  if (s == "true" || s == "false" || s == "nan" || s == "inf" || s == "-inf") return true;
  double d;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), d);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline std::string csv_cell(const Cell& c) {
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  const auto& s = std::get<std::string>(c);
  if (!s.empty() && s.find_first_of(",\"\n\r") == std::string::npos && !looks_numeric_or_bool(s) && s.front() != '#')
    return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline Cell parse_cell(const std::string& raw, bool quoted) {
  if (quoted) return raw;
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw == "nan") return std::nan("");
  if (raw == "inf") return INFINITY;
  if (raw == "-inf") return -INFINITY;
  const bool floating = raw.find_first_of(".eE") != std::string::npos;
  if (!floating) {
    std::int64_t i;
    const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), i);
    if (res.ec == std::errc() && res.ptr == raw.data() + raw.size()) return i;
  } else {
    double d;
    const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), d);
    if (res.ec == std::errc() && res.ptr == raw.data() + raw.size()) return d;
  }
  return raw;
}

inline std::vector<std::pair<std::string, bool>> split_csv_line(const std::string& line) {
  std::vector<std::pair<std::string, bool>> out;
  std::string cur;
  bool quoted = false, in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back(cur, quoted);
      cur.clear();
      quoted = false;
    } else {
      cur += ch;
    }
  }
  if (in_quotes) throw Error(ErrorKind::InvalidInput, "unterminated quote in CSV line");
  out.emplace_back(cur, quoted);
  return out;
}

inline nlohmann::json json_cell(const Cell& c) {
  return std::visit([](const auto& v) -> nlohmann::json {
    using V = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<V, double>) {
      if (!std::isfinite(v)) return format_double(v);
    }
    return v;
  }, c);
}

}  // namespace detail

inline std::string to_csv(const Table& t) {
  std::string out;
  if (!t.columns.empty()) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + detail::csv_cell(t.columns[i]);
    out += '\n';
  }
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + detail::csv_cell(row[i]);
    out += '\n';
  }
  for (const auto& c : t.comments) out += "# " + c + '\n';
  return out;
}

inline std::string to_json(const Table& t) {
  nlohmann::json j;
  j["columns"] = t.columns;
  j["data"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(detail::json_cell(c));
    j["data"].push_back(std::move(r));
  }
  j["comments"] = t.comments;
  return j.dump(1) + "\n";
}

inline std::string emit_report(const Table& t, Format f) { return f == Format::csv ? to_csv(t) : to_json(t); }

/// Inverse of to_csv.
inline Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') {
      t.comments.push_back(line.size() >= 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (!have_header) {
      for (const auto& [s, q] : cells) t.columns.push_back(s);
      have_header = true;
      continue;
    }
    std::vector<Cell> row;
    for (const auto& [s, q] : cells) row.push_back(detail::parse_cell(s, q));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace oscint
