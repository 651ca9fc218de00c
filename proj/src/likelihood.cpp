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

#include "chopro/likelihood.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace chopro {

namespace {
Eigen::MatrixXd chol_or_throw(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("differenced covariance is not positive definite");
  }
  return llt.matrixL();
}
}  // namespace

LogLikelihood::LogLikelihood(const ChoiceDataset& data, const UtilitySpec& spec,
                             const ErrorStructure& err, const HaltonPlan& plan)
    : data_(&data), model_(spec, err, data), plan_(plan) {
  const int dims = std::max(spec.n_alternatives - 2, 0);
  uniforms_ = plan_.draws(dims);
  task_is_complete_.reserve(data.tasks.size());
  for (const auto& task : data.tasks) {
    bool complete = static_cast<int>(task.alt_ids.size()) == spec.n_alternatives;
    if (complete) {
      for (std::size_t r = 0; r < task.alt_ids.size(); ++r) {
        complete = complete && task.available[r] &&
                   task.alt_ids[r] == static_cast<int>(r) + 1;
      }
    }
    task_is_complete_.push_back(static_cast<char>(complete));
  }
}

LogLikelihood::Context LogLikelihood::make_eval_context(const Eigen::VectorXd& theta) const {
  Context ctx;
  ctx.model_ctx = model_.make_context(theta);
  ctx.base_cov = model_.base_differenced_cov(theta);
  const int I = model_.spec().n_alternatives;
  ctx.chol_by_chosen.reserve(I);
  for (int chosen = 1; chosen <= I; ++chosen) {
    ctx.chol_by_chosen.push_back(
        chol_or_throw(differenced_cov_for_chosen(ctx.base_cov, chosen)));
  }
  return ctx;
}

double LogLikelihood::task_log_prob(const Context& ctx, std::size_t task_index) const {
  const ChoiceTask& task = data_->tasks[task_index];
  const int n_avail = task.n_available();
  if (n_avail < 2) return 0.0;  // a forced choice carries no information

  const Eigen::VectorXd v = model_.systematic_utilities(ctx.model_ctx, task);

  // Differences: non-chosen minus chosen, over available alternatives.
  Eigen::VectorXd b(n_avail - 1);
  const double v_chosen = v[task.chosen_pos];
  int k = 0;
  for (std::size_t r = 0; r < task.alt_ids.size(); ++r) {
    if (!task.available[r] || static_cast<int>(r) == task.chosen_pos) continue;
    b[k++] = v[r] - v_chosen;
  }

  Eigen::MatrixXd per_obs_uniforms;
  const Eigen::MatrixXd* uniforms = &uniforms_;
  if (plan_.per_observation_offset != 0) {
    per_obs_uniforms = plan_.draws(n_avail - 2, static_cast<int>(task_index));
    uniforms = &per_obs_uniforms;
  }

  double p;
  if (task_is_complete_[task_index]) {
    p = ghk_prob(ctx.chol_by_chosen[task.chosen_alt() - 1], -b, *uniforms);
  } else {
    const auto avail = task.available_alts();
    const Eigen::MatrixXd cov =
        differenced_cov_for_chosen(ctx.base_cov, task.chosen_alt(), avail);
    p = ghk_prob(chol_or_throw(cov), -b, *uniforms);
  }
  return std::log(std::max(p, kProbabilityFloor));
}

void LogLikelihood::fill_log_probs(const Eigen::VectorXd& theta, Eigen::VectorXd& out,
                                   bool parallel) const {
  const Context ctx = make_eval_context(theta);
  const auto n = static_cast<std::ptrdiff_t>(data_->tasks.size());
  out.resize(n);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
      out[t] = task_log_prob(ctx, static_cast<std::size_t>(t));
    }
  } else {
    for (std::ptrdiff_t t = 0; t < n; ++t) {
      out[t] = task_log_prob(ctx, static_cast<std::size_t>(t));
    }
  }
}

double LogLikelihood::value(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd lp;
  fill_log_probs(theta, lp, /*parallel=*/true);
  double total = 0.0;
  for (Eigen::Index t = 0; t < lp.size(); ++t) total += lp[t];  // fixed task order
  return total;
}

double LogLikelihood::value_serial(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd lp;
  fill_log_probs(theta, lp, /*parallel=*/false);
  double total = 0.0;
  for (Eigen::Index t = 0; t < lp.size(); ++t) total += lp[t];
  return total;
}

Eigen::VectorXd LogLikelihood::task_log_probs(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd lp;
  fill_log_probs(theta, lp, /*parallel=*/false);
  return lp;
}

}  // namespace chopro
