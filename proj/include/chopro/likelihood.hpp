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

#ifndef CHOPRO_LIKELIHOOD_HPP
#define CHOPRO_LIKELIHOOD_HPP

#include <vector>

#include <Eigen/Core>

#include "chopro/dataset.hpp"
#include "chopro/mnp.hpp"
#include "chopro/model.hpp"

namespace chopro {

// Simulated log-likelihood of a bound model over a dataset.  One Halton
// block is drawn at construction and shared by every observation and every
// evaluation (common random numbers), so the surface is deterministic.
//
// value() parallelizes the per-task loop with OpenMP; value_serial() is the
// plain reference loop.  Both store per-task terms and sum them in task
// order, so their results are bitwise identical regardless of thread count.
// The caller owns the dataset; it must outlive the evaluator.  One instance
// must not be evaluated from two threads at once when OpenMP nesting is
// enabled.
class LogLikelihood {
 public:
  LogLikelihood(const ChoiceDataset& data, const UtilitySpec& spec,
                const ErrorStructure& err, const HaltonPlan& plan);

  double value(const Eigen::VectorXd& theta) const;
  double value_serial(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd task_log_probs(const Eigen::VectorXd& theta) const;

  const Model& model() const { return model_; }
  const ChoiceDataset& data() const { return *data_; }
  const HaltonPlan& plan() const { return plan_; }

 private:
  struct Context {
    ModelContext model_ctx;
    Eigen::MatrixXd base_cov;
    // Cholesky factors of the differenced covariance per chosen alternative,
    // valid for tasks where every alternative is present and available.
    std::vector<Eigen::MatrixXd> chol_by_chosen;
  };

  Context make_eval_context(const Eigen::VectorXd& theta) const;
  double task_log_prob(const Context& ctx, std::size_t task_index) const;
  void fill_log_probs(const Eigen::VectorXd& theta, Eigen::VectorXd& out, bool parallel) const;

  const ChoiceDataset* data_;
  Model model_;
  HaltonPlan plan_;
  Eigen::MatrixXd uniforms_;
  std::vector<char> task_is_complete_;  // all alternatives present and available
};

// Log-probability floor guarding -inf during early optimizer steps.
inline constexpr double kProbabilityFloor = 1e-12;

}  // namespace chopro

#endif  // CHOPRO_LIKELIHOOD_HPP
