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

#include "chopro/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace chopro {

std::vector<int> PackingMap::indices_of(Group group) const {
  std::vector<int> idx;
  for (int i = 0; i < size(); ++i) {
    if (entries[i].group == group) idx.push_back(i);
  }
  return idx;
}

namespace {
std::string alt_scope_suffix(const std::vector<int>& alts) {
  if (alts.empty()) return "";
  std::string s = "|alt=";
  for (std::size_t i = 0; i < alts.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(alts[i]);
  }
  return s;
}
}  // namespace

Model::Model(UtilitySpec spec, ErrorStructure err, const ChoiceDataset& data)
    : spec_(std::move(spec)), err_(std::move(err)) {
  spec_.validate();
  if (err_.n_alternatives != spec_.n_alternatives) {
    throw std::invalid_argument("error structure and utility spec disagree on alternatives");
  }

  group_of_alt_.assign(spec_.n_alternatives + 1, 0);
  if (!spec_.ci_attributes.empty()) {
    for (int a = 1; a <= spec_.n_alternatives; ++a) {
      group_of_alt_[a] = spec_.group_of_alternative(a);
    }
  }

  // Bind weighted-sum covariates.
  for (int alt = 1; alt <= static_cast<int>(spec_.ws_covariates.size()); ++alt) {
    for (const auto& name : spec_.ws_covariates[alt - 1]) {
      ws_entries_.push_back({alt, bind_covariate(name, data, /*demographic=*/false)});
    }
  }
  for (const auto& attr : spec_.ci_attributes) bind_attribute(attr, data, ci_);
  for (const auto& attr : spec_.linear_attributes) bind_attribute(attr, data, linear_);

  build_packing();
  build_constraints_system();
}

Model::ColumnRef Model::bind_covariate(const std::string& name, const ChoiceDataset& data,
                                       bool demographic) const {
  ColumnRef ref;
  if (name == "const") {
    ref.is_const = true;
    return ref;
  }
  ref.column = data.column_index(name);
  if (ref.column < 0) {
    throw DataError("column '" + name + "' not found in dataset");
  }
  if (demographic) {
    for (const auto& task : data.tasks) {
      for (Eigen::Index r = 1; r < task.columns.rows(); ++r) {
        if (task.columns(r, ref.column) != task.columns(0, ref.column)) {
          throw DataError("column '" + name +
                          "' is used as a demographic but varies within individual " +
                          std::to_string(task.individual_id) + ", task " +
                          std::to_string(task.task_id));
        }
      }
    }
  }
  return ref;
}

void Model::bind_attribute(const NormalizedAttribute& attr, const ChoiceDataset& data,
                           std::vector<BoundAttribute>& out) {
  BoundAttribute bound;
  bound.name = attr.name;
  bound.column = data.column_index(attr.name);
  if (bound.column < 0) {
    throw DataError("attribute column '" + attr.name + "' not found in dataset");
  }
  bound.rule_of_alt.assign(spec_.n_alternatives + 1, -1);
  for (const auto& rule : attr.rules) {
    BoundRule br;
    br.rule = rule;
    if (rule.kind == NormalizationRule::Kind::MinMax) bound.any_minmax = true;
    if (rule.kind == NormalizationRule::Kind::EstimatedCutoffs) {
      const auto& c = rule.cutoffs;
      for (const auto& n : c.lower_covariates) br.z_lower.push_back(bind_covariate(n, data, true));
      for (const auto& n : c.upper_covariates) br.z_upper.push_back(bind_covariate(n, data, true));
      for (const auto& n : c.c_covariates) br.z_c.push_back(bind_covariate(n, data, true));
      for (const auto& n : c.d_covariates) br.z_d.push_back(bind_covariate(n, data, true));
    }
    const int rule_idx = static_cast<int>(bound.rules.size());
    if (rule.alternatives.empty()) {
      for (int a = 1; a <= spec_.n_alternatives; ++a) bound.rule_of_alt[a] = rule_idx;
    } else {
      for (int a : rule.alternatives) bound.rule_of_alt[a] = rule_idx;
    }
    bound.rules.push_back(std::move(br));
  }
  out.push_back(std::move(bound));
}

void Model::build_packing() {
  auto& pm = packing_;
  pm.entries.clear();

  // Mobius segments.
  pm.mobius_offset = 0;
  pm.n_capacity_groups = spec_.n_capacity_groups();
  const int g = spec_.n_ci_attributes();
  pm.mobius_seg_size = (pm.n_capacity_groups > 0) ? ((1 << g) - 1) : 0;
  for (int grp = 0; grp < pm.n_capacity_groups; ++grp) {
    const std::string prefix =
        (pm.n_capacity_groups > 1) ? "m[g" + std::to_string(grp + 1) + "]" : "m";
    for (SubsetId s = 1; s <= static_cast<SubsetId>(pm.mobius_seg_size); ++s) {
      pm.entries.push_back({prefix + "(" + subset_label(s) + ")",
                            PackingMap::Group::Mobius, grp});
    }
  }

  // Cut-off coefficients, Choquet attributes first, then linear ones.
  pm.cutoff_offset = pm.size();
  auto pack_cutoffs = [&](std::vector<BoundAttribute>& attrs) {
    for (auto& attr : attrs) {
      for (auto& br : attr.rules) {
        if (br.rule.kind != NormalizationRule::Kind::EstimatedCutoffs) continue;
        const auto& c = br.rule.cutoffs;
        const std::string scope = "cut(" + attr.name + alt_scope_suffix(br.rule.alternatives) + ")";
        const bool trap = c.kind == CutoffParameterization::Kind::Trapezoidal;
        auto pack_group = [&](const std::vector<std::string>& covs, const char* tag) {
          const int off = pm.size();
          for (const auto& n : covs) {
            pm.entries.push_back({scope + "." + tag + "." + n, PackingMap::Group::Cutoff, -1});
          }
          return off;
        };
        br.off_lower = pack_group(c.lower_covariates, trap ? "a" : "lower");
        br.off_upper = pack_group(c.upper_covariates, trap ? "b" : "upper");
        if (trap) {
          br.off_c = pack_group(c.c_covariates, "c");
          br.off_d = pack_group(c.d_covariates, "d");
        }
      }
    }
  };
  pack_cutoffs(ci_);
  pack_cutoffs(linear_);

  // Weighted-sum betas (spec order), then linear-attribute coefficients.
  pm.ws_offset = pm.size();
  for (int alt = 1; alt <= static_cast<int>(spec_.ws_covariates.size()); ++alt) {
    for (const auto& n : spec_.ws_covariates[alt - 1]) {
      pm.entries.push_back({"beta(alt" + std::to_string(alt) + ")." + n,
                            PackingMap::Group::Ws, -1});
    }
  }
  linear_coeff_index_.clear();
  for (const auto& attr : linear_) {
    linear_coeff_index_.push_back(pm.size());
    pm.entries.push_back({"gamma(" + attr.name + ")", PackingMap::Group::Ws, -1});
  }

  // Error parameters.
  pm.error_offset = pm.size();
  for (const auto& n : err_.param_names()) {
    pm.entries.push_back({n, PackingMap::Group::Error, -1});
  }

  // Optional Choquet scale.
  pm.scale_offset = -1;
  if (spec_.ci_scale.estimated) {
    pm.scale_offset = pm.size();
    pm.entries.push_back({"log_ci_scale", PackingMap::Group::Scale, -1});
  }
}

void Model::build_constraints_system() {
  const int n = n_params();
  const int n_groups = packing_.n_capacity_groups;
  if (n_groups == 0) {
    constraints_ = LinearSystem{};
    constraints_.a_eq.resize(0, n);
    constraints_.a_in.resize(0, n);
    return;
  }
  const int g = spec_.n_ci_attributes();
  const ConstraintSystem cs = chopro::build_constraints(g);
  const int seg = packing_.mobius_seg_size;
  const int n_in = static_cast<int>(cs.inequalities.size());

  constraints_.a_eq = Eigen::MatrixXd::Zero(n_groups, n);
  constraints_.b_eq = Eigen::VectorXd::Ones(n_groups);
  constraints_.a_in = Eigen::MatrixXd::Zero(n_groups * n_in, n);
  constraints_.b_in = Eigen::VectorXd::Zero(n_groups * n_in);
  constraints_.inequality_labels.clear();
  for (int grp = 0; grp < n_groups; ++grp) {
    const int off = packing_.mobius_offset + grp * seg;
    for (int j = 0; j < seg; ++j) constraints_.a_eq(grp, off + j) = 1.0;
    for (int r = 0; r < n_in; ++r) {
      for (int j = 0; j < seg; ++j) {
        constraints_.a_in(grp * n_in + r, off + j) = cs.inequalities[r].coeffs[j];
      }
      std::string label = "monotonicity: attr " +
                          std::to_string(cs.inequalities[r].attribute + 1) + ", H={" +
                          subset_label(cs.inequalities[r].conditioning_set) + "}";
      if (n_groups > 1) label += " [group " + std::to_string(grp + 1) + "]";
      constraints_.inequality_labels.push_back(std::move(label));
    }
  }
}

std::vector<std::string> Model::param_names() const {
  std::vector<std::string> names;
  names.reserve(packing_.entries.size());
  for (const auto& e : packing_.entries) names.push_back(e.name);
  return names;
}

ModelContext Model::make_context(const Eigen::VectorXd& theta) const {
  if (theta.size() != n_params()) {
    throw std::invalid_argument("parameter vector length mismatch: expected " +
                                std::to_string(n_params()) + ", got " +
                                std::to_string(theta.size()));
  }
  ModelContext ctx;
  ctx.theta = theta;
  const int n_groups = packing_.n_capacity_groups;
  ctx.capacities.reserve(n_groups);
  for (int grp = 0; grp < n_groups; ++grp) {
    ctx.capacities.push_back(mobius_to_capacity(mobius_of_group(theta, grp)));
  }
  ctx.ci_scale = ci_scale(theta);
  return ctx;
}

MobiusVector Model::mobius_of_group(const Eigen::VectorXd& theta, int group) const {
  const int g = spec_.n_ci_attributes();
  MobiusVector m = MobiusVector::zeros(g);
  const int off = packing_.mobius_offset + group * packing_.mobius_seg_size;
  for (int j = 0; j < packing_.mobius_seg_size; ++j) m.values[j + 1] = theta[off + j];
  return m;
}

std::vector<Capacity> Model::capacities(const Eigen::VectorXd& theta) const {
  std::vector<Capacity> out;
  for (int grp = 0; grp < packing_.n_capacity_groups; ++grp) {
    out.push_back(mobius_to_capacity(mobius_of_group(theta, grp)));
  }
  return out;
}

double Model::ci_scale(const Eigen::VectorXd& theta) const {
  if (packing_.scale_offset < 0) return spec_.ci_scale.fixed_value;
  return std::exp(theta[packing_.scale_offset]);
}

Eigen::MatrixXd Model::base_differenced_cov(const Eigen::VectorXd& theta) const {
  const int n_err = err_.n_free_params();
  std::vector<double> params(n_err);
  for (int i = 0; i < n_err; ++i) params[i] = theta[packing_.error_offset + i];
  return err_.base_differenced_cov(params);
}

double Model::covariate_value(const ColumnRef& ref, const ChoiceTask& task, int row) const {
  return ref.is_const ? 1.0 : task.columns(row, ref.column);
}

MembershipSpec Model::resolve_rule(const BoundRule& br, const ModelContext& ctx,
                                   const ChoiceTask& task) const {
  const auto& c = br.rule.cutoffs;
  auto zvals = [&](const std::vector<ColumnRef>& refs) {
    std::vector<double> z(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) z[i] = covariate_value(refs[i], task, 0);
    return z;
  };
  auto seg = [&](int off, std::size_t len) {
    return std::span<const double>(ctx.theta.data() + off, len);
  };
  const auto zl = zvals(br.z_lower);
  const auto zu = zvals(br.z_upper);
  const double lower = cutoff_gap(seg(br.off_lower, zl.size()), zl);
  const double upper = lower + cutoff_gap(seg(br.off_upper, zu.size()), zu);
  switch (c.kind) {
    case CutoffParameterization::Kind::HalfTriangularIncreasing:
      return MembershipSpec::half_triangular_increasing(lower, upper);
    case CutoffParameterization::Kind::HalfTriangularDecreasing:
      return MembershipSpec::half_triangular_decreasing(lower, upper);
    case CutoffParameterization::Kind::Trapezoidal: {
      const auto zc = zvals(br.z_c);
      const auto zd = zvals(br.z_d);
      const double cc = upper + cutoff_gap(seg(br.off_c, zc.size()), zc);
      const double dd = cc + cutoff_gap(seg(br.off_d, zd.size()), zd);
      return MembershipSpec::trapezoidal(lower, upper, cc, dd);
    }
  }
  throw std::logic_error("unreachable cut-off kind");
}

void Model::normalize_attribute(const BoundAttribute& attr, const ModelContext& ctx,
                                const ChoiceTask& task, Eigen::VectorXd& out) const {
  const int n_rows = static_cast<int>(task.alt_ids.size());
  out.setZero(n_rows);

  // Range across the task's available alternatives, for MinMax rules.
  double lo = 0.0, hi = 0.0;
  if (attr.any_minmax) {
    bool first = true;
    for (int r = 0; r < n_rows; ++r) {
      if (!task.available[r]) continue;
      const double v = task.columns(r, attr.column);
      if (first) {
        lo = hi = v;
        first = false;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }

  // Resolve estimated cut-off rules once per task (demographics are
  // task-constant by validation).
  std::array<MembershipSpec, 8> resolved;
  std::array<bool, 8> has_resolved{};
  if (attr.rules.size() > resolved.size()) {
    throw std::invalid_argument("too many rules on attribute '" + attr.name + "'");
  }

  for (int r = 0; r < n_rows; ++r) {
    if (!task.available[r]) continue;
    const int rule_idx = attr.rule_of_alt[task.alt_ids[r]];
    if (rule_idx < 0) {
      throw std::invalid_argument("attribute '" + attr.name + "' has no rule for alternative " +
                                  std::to_string(task.alt_ids[r]));
    }
    const BoundRule& br = attr.rules[rule_idx];
    const double x = task.columns(r, attr.column);
    switch (br.rule.kind) {
      case NormalizationRule::Kind::MinMax: {
        if (hi == lo) {
          out[r] = 0.5;
        } else if (br.rule.direction == Direction::Positive) {
          out[r] = (x - lo) / (hi - lo);
        } else {
          out[r] = (hi - x) / (hi - lo);
        }
        break;
      }
      case NormalizationRule::Kind::FixedMembership:
        out[r] = membership_value(x, br.rule.membership);
        break;
      case NormalizationRule::Kind::EstimatedCutoffs: {
        if (!has_resolved[rule_idx]) {
          resolved[rule_idx] = resolve_rule(br, ctx, task);
          has_resolved[rule_idx] = true;
        }
        out[r] = membership_value(x, resolved[rule_idx]);
        break;
      }
    }
  }
}

Eigen::MatrixXd Model::normalized_ci_matrix(const ModelContext& ctx, const ChoiceTask& task) const {
  const int n_rows = static_cast<int>(task.alt_ids.size());
  Eigen::MatrixXd xn(n_rows, static_cast<int>(ci_.size()));
  Eigen::VectorXd col;
  for (std::size_t a = 0; a < ci_.size(); ++a) {
    normalize_attribute(ci_[a], ctx, task, col);
    xn.col(static_cast<Eigen::Index>(a)) = col;
  }
  return xn;
}

Eigen::VectorXd Model::systematic_utilities(const ModelContext& ctx, const ChoiceTask& task) const {
  const int n_rows = static_cast<int>(task.alt_ids.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_rows);

  // Weighted-sum part.
  int k = packing_.ws_offset;
  for (const auto& e : ws_entries_) {
    const double beta = ctx.theta[k++];
    for (int r = 0; r < n_rows; ++r) {
      if (task.alt_ids[r] == e.alt && task.available[r]) {
        v[r] += beta * covariate_value(e.ref, task, r);
      }
    }
  }

  // Linear part on normalized attributes.
  Eigen::VectorXd col;
  for (std::size_t a = 0; a < linear_.size(); ++a) {
    normalize_attribute(linear_[a], ctx, task, col);
    const double gamma = ctx.theta[linear_coeff_index_[a]];
    for (int r = 0; r < n_rows; ++r) {
      if (task.available[r]) v[r] += gamma * col[r];
    }
  }

  // Choquet part.
  if (!ci_.empty()) {
    const Eigen::MatrixXd xn = normalized_ci_matrix(ctx, task);
    std::array<double, kMaxAttributes> row{};
    const int g = static_cast<int>(ci_.size());
    for (int r = 0; r < n_rows; ++r) {
      if (!task.available[r]) continue;
      for (int a = 0; a < g; ++a) row[a] = xn(r, a);
      const int grp = group_of_alt_[task.alt_ids[r]];
      v[r] += ctx.ci_scale *
              choquet_integral(std::span<const double>(row.data(), g), ctx.capacities[grp]);
    }
  }
  return v;
}

Eigen::VectorXd Model::feasible_start(const ChoiceDataset& data) const {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n_params());

  // Uniform additive capacity per group, with the total pinned to 1 exactly.
  const int g = spec_.n_ci_attributes();
  for (int grp = 0; grp < packing_.n_capacity_groups; ++grp) {
    const int off = packing_.mobius_offset + grp * packing_.mobius_seg_size;
    double partial = 0.0;
    for (int a = 0; a < g; ++a) {
      const SubsetId s = SubsetId{1} << a;
      const double w = (a + 1 < g) ? 1.0 / g : 1.0 - partial;
      partial += w;
      theta[off + static_cast<int>(s) - 1] = w;
    }
  }

  // Cut-off coefficients spanning the empirical attribute range.
  auto start_cutoffs = [&](const std::vector<BoundAttribute>& attrs) {
    for (const auto& attr : attrs) {
      for (const auto& br : attr.rules) {
        if (br.rule.kind != NormalizationRule::Kind::EstimatedCutoffs) continue;
        std::vector<double> values;
        for (const auto& task : data.tasks) {
          for (std::size_t r = 0; r < task.alt_ids.size(); ++r) {
            if (!task.available[r]) continue;
            if (attr.rule_of_alt[task.alt_ids[r]] !=
                static_cast<int>(&br - attr.rules.data())) {
              continue;
            }
            values.push_back(task.columns(static_cast<Eigen::Index>(r), attr.column));
          }
        }
        if (values.empty()) {
          throw DataError("no observations to seed cut-offs for attribute '" + attr.name + "'");
        }
        const double q10 = percentile(values, 0.10);
        const double q30 = percentile(values, 0.30);
        const double q70 = percentile(values, 0.70);
        const double q90 = percentile(values, 0.90);
        constexpr double kMinPoint = 1e-6;
        constexpr double kMinGap = 1e-3;
        const bool trap = br.rule.cutoffs.kind == CutoffParameterization::Kind::Trapezoidal;
        theta[br.off_lower] = std::log(std::max(q10, kMinPoint));
        if (trap) {
          theta[br.off_upper] = std::log(std::max(q30 - q10, kMinGap));
          theta[br.off_c] = std::log(std::max(q70 - q30, kMinGap));
          theta[br.off_d] = std::log(std::max(q90 - q70, kMinGap));
        } else {
          theta[br.off_upper] = std::log(std::max(q90 - q10, kMinGap));
        }
      }
    }
  };
  start_cutoffs(ci_);
  start_cutoffs(linear_);

  // Betas stay zero.  Error parameters start at the IID covariance.
  if (err_.n_free_params() > 0) {
    ErrorStructure iid = err_;
    iid.kind = ErrorStructure::Kind::IID;
    const auto params = err_.encode(iid.base_differenced_cov(std::span<const double>{}));
    for (std::size_t i = 0; i < params.size(); ++i) {
      theta[packing_.error_offset + static_cast<int>(i)] = params[i];
    }
  }
  // log_ci_scale stays zero (scale 1).
  return theta;
}

}  // namespace chopro
