// Copyright 2026 The qxsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QXSIM_TABLE_HPP_
#define QXSIM_TABLE_HPP_

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qxsim/common.hpp"

namespace qxsim::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Rectangular, typed result table plus the metadata that reproduces it.
/// wall_ms is serialized as stored; run_experiment pins it to 0 so output
/// files stay byte-identical across runs (timing goes to stderr instead).
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string experiment;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::int64_t wall_ms = 0;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
      fail(Errc::OutOfRange, "row width does not match column count");
    rows.push_back(std::move(row));
  }
};

/// Full-precision decimal rendering: 17 significant digits round-trip any
/// IEEE double exactly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string cell_to_string(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::int64_t>(c))
    return std::to_string(std::get<std::int64_t>(c));
  return std::get<std::string>(c);
}

inline std::string to_csv(const ResultTable& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_to_string(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::json to_json(const ResultTable& t) {
  nlohmann::json meta;
  meta["experiment"] = t.experiment;
  meta["params"] = t.params;
  meta["seed"] = t.seed;
  meta["version"] = t.version;
  meta["wall_ms"] = t.wall_ms;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (std::holds_alternative<double>(c))
        obj[t.columns[i]] = std::get<double>(c);
      else if (std::holds_alternative<std::int64_t>(c))
        obj[t.columns[i]] = std::get<std::int64_t>(c);
      else
        obj[t.columns[i]] = std::get<std::string>(c);
    }
    rows.push_back(std::move(obj));
  }
  nlohmann::json root;
  root["meta"] = std::move(meta);
  root["rows"] = std::move(rows);
  return root;
}

inline std::string serialize(const ResultTable& t, const std::string& format) {
  if (format == "csv") return to_csv(t);
  if (format == "json") return to_json(t).dump(2) + "\n";
  fail(Errc::BadParam, "format must be csv or json");
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot open " + path);
  out << content;
  if (!out) fail(Errc::IoError, "failed writing " + path);
}

}  // namespace qxsim::cli

#endif  // QXSIM_TABLE_HPP_
