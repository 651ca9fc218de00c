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

#ifndef CHOPRO_DATASET_HPP
#define CHOPRO_DATASET_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace chopro {

// Data problems carry a location (row or task) so the CLI can point at
// the offending cell.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One choice task: the alternatives shown (ascending 1-based ids), their
// availability, a row of every data column per alternative, and the
// chosen position.
struct ChoiceTask {
  std::int64_t individual_id = 0;
  std::int64_t task_id = 0;
  std::vector<int> alt_ids;
  std::vector<char> available;
  Eigen::MatrixXd columns;  // n_rows x n_columns, row per alternative
  int chosen_pos = -1;      // index into alt_ids

  int chosen_alt() const { return alt_ids[chosen_pos]; }
  int n_available() const;
  std::vector<int> available_alts() const;
};

// Long-format panel: one task per (individual, task) pair.  Columns hold
// attributes and demographics alike; the model binding decides how each
// referenced column is used and validates the demographic ones.
struct ChoiceDataset {
  std::vector<std::string> column_names;
  std::vector<ChoiceTask> tasks;
  int n_alternatives = 0;  // max alternative id seen

  int column_index(const std::string& name) const;  // -1 when absent
  std::size_t n_tasks() const { return tasks.size(); }
};

// Parse a long-format CSV with header columns
//   individual_id, task_id, alt_id, chosen, available, <data columns...>
// Validates: numeric cells, unique (individual, task, alt), exactly one
// chosen row per task, chosen row available.  Throws DataError with the
// offending row/task on the first violation.
ChoiceDataset ingest_csv(const std::string& path);

// Canonical serialization (stable float formatting); ingest(export(ds))
// re-exports byte-identically.
void export_csv(const ChoiceDataset& ds, const std::string& path);

// Shortest round-trip decimal form of a double, used by every writer that
// must be byte-reproducible.
std::string format_double(double v);

}  // namespace chopro

#endif  // CHOPRO_DATASET_HPP
