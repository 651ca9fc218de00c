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

#ifndef CHOPRO_MODEL_HPP
#define CHOPRO_MODEL_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "chopro/choquet.hpp"
#include "chopro/dataset.hpp"
#include "chopro/fuzzy.hpp"
#include "chopro/mnp.hpp"

namespace chopro {

// Layout of the packed parameter vector:
//   [ Mobius values per capacity group (nonempty subsets, mask order)
//   | cut-off coefficients per normalized attribute
//   | weighted-sum betas and linear-attribute coefficients
//   | error free parameters
//   | optional log of the Choquet scale factor ]
// Segment boundaries derive solely from the utility spec, so packing and
// unpacking are deterministic inverses.
struct PackingMap {
  enum class Group { Mobius, Cutoff, Ws, Error, Scale };
  struct Entry {
    std::string name;
    Group group = Group::Ws;
    int capacity_group = -1;  // Mobius entries only
  };

  std::vector<Entry> entries;
  int mobius_offset = 0;
  int mobius_seg_size = 0;  // (1 << G) - 1, per group
  int n_capacity_groups = 0;
  int cutoff_offset = 0;
  int ws_offset = 0;
  int error_offset = 0;
  int scale_offset = -1;  // -1 when the scale is fixed

  int size() const { return static_cast<int>(entries.size()); }
  std::vector<int> indices_of(Group group) const;
};

// Per-evaluation state derived from one parameter vector: the capacity
// lattice of every group and the resolved scale factor.
struct ModelContext {
  Eigen::VectorXd theta;
  std::vector<Capacity> capacities;
  double ci_scale = 1.0;
};

// A utility spec and error structure bound to a dataset schema.  Binding
// resolves every referenced column (throwing DataError with the column
// name when missing), fixes the packing layout, and validates that
// demographic columns are constant within each task.
class Model {
 public:
  Model(UtilitySpec spec, ErrorStructure err, const ChoiceDataset& data);

  const UtilitySpec& spec() const { return spec_; }
  const ErrorStructure& error() const { return err_; }
  const PackingMap& packing() const { return packing_; }
  int n_params() const { return packing_.size(); }
  std::vector<std::string> param_names() const;

  ModelContext make_context(const Eigen::VectorXd& theta) const;

  // Systematic utility of every alternative row of a task (unavailable
  // rows get 0 and must be ignored by the caller).
  Eigen::VectorXd systematic_utilities(const ModelContext& ctx, const ChoiceTask& task) const;

  // Normalized Choquet attribute values per task row (n_rows x G).
  Eigen::MatrixXd normalized_ci_matrix(const ModelContext& ctx, const ChoiceTask& task) const;

  Eigen::MatrixXd base_differenced_cov(const Eigen::VectorXd& theta) const;
  std::vector<Capacity> capacities(const Eigen::VectorXd& theta) const;
  MobiusVector mobius_of_group(const Eigen::VectorXd& theta, int group) const;
  double ci_scale(const Eigen::VectorXd& theta) const;

  // The linear system (equality per capacity group plus monotonicity
  // inequalities) over the packed vector; empty when there is no Choquet
  // component.
  struct LinearSystem {
    Eigen::MatrixXd a_eq;
    Eigen::VectorXd b_eq;
    Eigen::MatrixXd a_in;
    Eigen::VectorXd b_in;
    std::vector<std::string> inequality_labels;
    bool empty() const { return a_eq.rows() == 0 && a_in.rows() == 0; }
  };
  const LinearSystem& constraints() const { return constraints_; }

  // Strictly feasible start: uniform additive capacities, cut-offs spanning
  // the empirical 10th-90th percentile range, zero betas, IID-matching
  // error parameters, unit scale.
  Eigen::VectorXd feasible_start(const ChoiceDataset& data) const;

 private:
  struct ColumnRef {
    bool is_const = false;
    int column = -1;
  };
  struct WsEntry {
    int alt = 0;  // 1-based
    ColumnRef ref;
  };
  struct BoundRule {
    NormalizationRule rule;
    std::vector<ColumnRef> z_lower, z_upper, z_c, z_d;
    int off_lower = -1, off_upper = -1, off_c = -1, off_d = -1;
  };
  struct BoundAttribute {
    std::string name;
    int column = -1;
    std::vector<BoundRule> rules;
    std::vector<int> rule_of_alt;  // index 1..n_alternatives
    bool any_minmax = false;
  };

  void bind_attribute(const NormalizedAttribute& attr, const ChoiceDataset& data,
                      std::vector<BoundAttribute>& out);
  ColumnRef bind_covariate(const std::string& name, const ChoiceDataset& data,
                           bool demographic) const;
  double covariate_value(const ColumnRef& ref, const ChoiceTask& task, int row) const;
  MembershipSpec resolve_rule(const BoundRule& br, const ModelContext& ctx,
                              const ChoiceTask& task) const;
  void normalize_attribute(const BoundAttribute& attr, const ModelContext& ctx,
                           const ChoiceTask& task, Eigen::VectorXd& out) const;
  void build_packing();
  void build_constraints_system();

  UtilitySpec spec_;
  ErrorStructure err_;
  PackingMap packing_;
  LinearSystem constraints_;
  std::vector<BoundAttribute> ci_;
  std::vector<BoundAttribute> linear_;
  std::vector<WsEntry> ws_entries_;
  std::vector<int> linear_coeff_index_;  // theta index per linear attribute
  std::vector<int> group_of_alt_;        // capacity group per alternative id
};

}  // namespace chopro

#endif  // CHOPRO_MODEL_HPP
