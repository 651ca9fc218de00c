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

#ifndef CHOPRO_ESTIMATOR_HPP
#define CHOPRO_ESTIMATOR_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "chopro/likelihood.hpp"
#include "chopro/model.hpp"
#include "chopro/sqp.hpp"

namespace chopro {

struct OptimizerConfig {
  int max_iterations = 150;
  double objective_tol = 1e-7;
  double feasibility_tol = 1e-8;
  double kkt_tol = 1e-3;
  double fd_step = 1e-4;       // gradient step on the packed scale
  double hessian_step = 1e-3;  // standard-error Hessian step
  HaltonPlan plan;
  bool compute_std_errors = true;

  void validate() const;  // all tolerances must be positive
};

struct EstimationResult {
  Eigen::VectorXd theta;
  PackingMap packing;
  std::vector<std::string> param_names;

  double loglik = 0.0;
  double aic_value = 0.0;
  int n_free_params = 0;

  // NaN entries are unavailable (active constraint or singular Hessian);
  // se_available mirrors them.  se_note records a degenerate Hessian.
  std::vector<double> std_errors;
  std::vector<char> se_available;
  std::string se_note;

  int n_iterations = 0;
  std::string convergence_status;
  bool converged = false;
  double kkt_residual = 0.0;
  std::vector<int> active_inequality_indices;
  std::vector<std::string> active_constraints;
  std::vector<double> loglik_trace;  // nondecreasing across accepted steps
};

// Akaike information criterion: 2k - 2 loglik.
double aic(double loglik, int n_free_params);

// Constrained maximum simulated likelihood from the model's feasible start.
EstimationResult estimate(const ChoiceDataset& data, const UtilitySpec& spec,
                          const ErrorStructure& err, const OptimizerConfig& config);

// Standard errors from the inverse central-difference Hessian of the
// negative log-likelihood at theta-hat.  Parameters sitting on an active
// inequality are flagged unavailable instead of reported; a singular
// Hessian flags everything and sets se_note.  Returns the filled vector.
std::vector<double> standard_errors(EstimationResult& result, const ChoiceDataset& data,
                                    const UtilitySpec& spec, const ErrorStructure& err,
                                    const OptimizerConfig& config);

}  // namespace chopro

#endif  // CHOPRO_ESTIMATOR_HPP
