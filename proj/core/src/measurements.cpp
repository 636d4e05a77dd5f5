// Copyright 2026 The tmsq Authors
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

#include "tmsq/measurements.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <string_view>
#include <system_error>

#include <fmt/format.h>

namespace tmsq {
namespace {

constexpr std::array<std::string_view, 7> kRequired{
    "label", "probe_db", "conjugate_db", "squeezed_db", "antisqueezed_db", "v_p", "v_c"};
constexpr std::array<std::string_view, 2> kOptional{"electronic_floor_db", "shot_noise_db"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> to_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace

InputError::InputError(std::size_t row, const std::string& what)
    : std::runtime_error(row == 0 ? what : fmt::format("row {}: {}", row, what)), row_(row) {}

std::vector<MeasurementPoint> read_measurements(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw InputError(0, "empty input: missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::map<std::string, std::size_t, std::less<>> column;
  const auto header = split(line);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = header[i];
    const bool known = std::find(kRequired.begin(), kRequired.end(), name) != kRequired.end() ||
                       std::find(kOptional.begin(), kOptional.end(), name) != kOptional.end();
    if (!known) throw InputError(0, fmt::format("unknown column '{}'", name));
    if (!column.emplace(std::string(name), i).second) {
      throw InputError(0, fmt::format("duplicate column '{}'", name));
    }
  }
  for (const auto name : kRequired) {
    if (!column.count(name)) throw InputError(0, fmt::format("missing column '{}'", name));
  }

  std::vector<MeasurementPoint> points;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw InputError(row, fmt::format("expected {} cells, found {}", header.size(), cells.size()));
    }
    const auto cell = [&](std::string_view name) -> std::optional<std::string_view> {
      const auto it = column.find(name);
      if (it == column.end() || cells[it->second].empty()) return std::nullopt;
      return cells[it->second];
    };
    const auto number = [&](std::string_view name) -> std::optional<double> {
      const auto text = cell(name);
      if (!text) return std::nullopt;
      const auto v = to_number(*text);
      if (!v) throw InputError(row, fmt::format("column '{}': '{}' is not a number", name, *text));
      return v;
    };
    const auto required = [&](std::string_view name) {
      const auto v = number(name);
      if (!v) throw InputError(row, fmt::format("column '{}' is empty", name));
      return *v;
    };

    MeasurementPoint p;
    p.label = std::string(cell("label").value_or(""));
    const double shot = number("shot_noise_db").value_or(0.0);
    p.probe_db = required("probe_db") - shot;
    p.conjugate_db = required("conjugate_db") - shot;
    p.squeezed_db = required("squeezed_db") - shot;
    p.antisqueezed_db = required("antisqueezed_db") - shot;
    p.v_p = required("v_p");
    p.v_c = required("v_c");
    for (const auto& [name, v] : {std::pair{"v_p", p.v_p}, std::pair{"v_c", p.v_c}}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InputError(row, fmt::format("{}={} outside [0, 1]", name, v));
      }
    }
    if (const auto floor = number("electronic_floor_db")) {
      const double f = *floor - shot;
      const std::array<std::pair<const char*, double>, 5> levels{
          {{"shot noise", 0.0},
           {"probe_db", p.probe_db},
           {"conjugate_db", p.conjugate_db},
           {"squeezed_db", p.squeezed_db},
           {"antisqueezed_db", p.antisqueezed_db}}};
      for (const auto& [name, level] : levels) {
        if (f >= level) {
          throw InputError(row, fmt::format("electronic floor ({} dB) at or above {}", *floor, name));
        }
      }
      p.electronic_floor_db = f;
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw InputError(0, "no data rows");
  return points;
}

std::vector<MeasurementPoint> load_measurements(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(0, fmt::format("cannot open '{}'", path.string()));
  return read_measurements(in);
}

}  // namespace tmsq
