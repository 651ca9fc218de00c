/*
 * Copyright 2026 The choquet-probit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "chopro/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace chopro {

int ChoiceTask::n_available() const {
  int n = 0;
  for (char a : available) n += (a != 0);
  return n;
}

std::vector<int> ChoiceTask::available_alts() const {
  std::vector<int> alts;
  for (std::size_t i = 0; i < alt_ids.size(); ++i) {
    if (available[i]) alts.push_back(alt_ids[i]);
  }
  return alts;
}

int ChoiceDataset::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < column_names.size(); ++i) {
    if (column_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  return fields;
}

double parse_double(const std::string& field, std::size_t line_no, const std::string& column) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                    "': malformed numeric cell '" + field + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& field, std::size_t line_no, const std::string& column) {
  std::int64_t v = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                    "': malformed integer cell '" + field + "'");
  }
  return v;
}

struct RawRow {
  std::int64_t individual_id;
  std::int64_t task_id;
  int alt_id;
  int chosen;
  int available;
  std::vector<double> data;
  std::size_t line_no;
};

constexpr const char* kIdColumns[5] = {"individual_id", "task_id", "alt_id", "chosen",
                                       "available"};

}  // namespace

ChoiceDataset ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty dataset file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 5) throw DataError("header must start with the five id columns");
  for (int i = 0; i < 5; ++i) {
    if (header[i] != kIdColumns[i]) {
      throw DataError(std::string("header column ") + std::to_string(i + 1) + " must be '" +
                      kIdColumns[i] + "', got '" + header[i] + "'");
    }
  }

  ChoiceDataset ds;
  ds.column_names.assign(header.begin() + 5, header.end());
  for (std::size_t i = 0; i < ds.column_names.size(); ++i) {
    for (std::size_t j = i + 1; j < ds.column_names.size(); ++j) {
      if (ds.column_names[i] == ds.column_names[j]) {
        throw DataError("duplicate column name '" + ds.column_names[i] + "'");
      }
    }
  }

  // Group rows by (individual, task), preserving first-appearance order.
  std::vector<std::pair<std::int64_t, std::int64_t>> task_order;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<RawRow>> groups;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    RawRow row;
    row.line_no = line_no;
    row.individual_id = parse_int(fields[0], line_no, header[0]);
    row.task_id = parse_int(fields[1], line_no, header[1]);
    row.alt_id = static_cast<int>(parse_int(fields[2], line_no, header[2]));
    row.chosen = static_cast<int>(parse_int(fields[3], line_no, header[3]));
    row.available = static_cast<int>(parse_int(fields[4], line_no, header[4]));
    if (row.alt_id < 1) {
      throw DataError("line " + std::to_string(line_no) + ": alt_id must be >= 1");
    }
    if (row.chosen != 0 && row.chosen != 1) {
      throw DataError("line " + std::to_string(line_no) + ": chosen must be 0 or 1");
    }
    if (row.available != 0 && row.available != 1) {
      throw DataError("line " + std::to_string(line_no) + ": available must be 0 or 1");
    }
    row.data.reserve(header.size() - 5);
    for (std::size_t f = 5; f < fields.size(); ++f) {
      const double v = parse_double(fields[f], line_no, header[f]);
      if (!std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ", column '" + header[f] +
                        "': non-finite value");
      }
      row.data.push_back(v);
    }
    const auto key = std::make_pair(row.individual_id, row.task_id);
    auto it = groups.find(key);
    if (it == groups.end()) {
      task_order.push_back(key);
      it = groups.emplace(key, std::vector<RawRow>{}).first;
    }
    it->second.push_back(row);
  }

  for (const auto& key : task_order) {
    auto rows = groups.at(key);
    std::sort(rows.begin(), rows.end(),
              [](const RawRow& a, const RawRow& b) { return a.alt_id < b.alt_id; });
    const std::string where = "individual " + std::to_string(key.first) + ", task " +
                              std::to_string(key.second);
    ChoiceTask task;
    task.individual_id = key.first;
    task.task_id = key.second;
    task.columns.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(ds.column_names.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r > 0 && rows[r].alt_id == rows[r - 1].alt_id) {
        throw DataError(where + ": duplicate alternative " + std::to_string(rows[r].alt_id));
      }
      task.alt_ids.push_back(rows[r].alt_id);
      task.available.push_back(static_cast<char>(rows[r].available));
      for (std::size_t c = 0; c < rows[r].data.size(); ++c) {
        task.columns(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            rows[r].data[c];
      }
      if (rows[r].chosen == 1) {
        if (task.chosen_pos >= 0) {
          throw DataError(where + ": multiple chosen alternatives");
        }
        task.chosen_pos = static_cast<int>(r);
      }
      ds.n_alternatives = std::max(ds.n_alternatives, rows[r].alt_id);
    }
    if (task.chosen_pos < 0) throw DataError(where + ": no chosen alternative");
    if (!task.available[task.chosen_pos]) {
      throw DataError(where + ": chosen alternative is not available");
    }
    ds.tasks.push_back(std::move(task));
  }
  if (ds.tasks.empty()) throw DataError("dataset has no rows: " + path);
  return ds;
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void export_csv(const ChoiceDataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + path);
  out << "individual_id,task_id,alt_id,chosen,available";
  for (const auto& name : ds.column_names) out << ',' << name;
  out << '\n';
  for (const auto& task : ds.tasks) {
    for (std::size_t r = 0; r < task.alt_ids.size(); ++r) {
      out << task.individual_id << ',' << task.task_id << ',' << task.alt_ids[r] << ','
          << (static_cast<int>(r) == task.chosen_pos ? 1 : 0) << ','
          << static_cast<int>(task.available[r]);
      for (Eigen::Index c = 0; c < task.columns.cols(); ++c) {
        out << ',' << format_double(task.columns(static_cast<Eigen::Index>(r), c));
      }
      out << '\n';
    }
  }
  if (!out) throw DataError("failed writing dataset file: " + path);
}

}  // namespace chopro
