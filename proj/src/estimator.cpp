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

#include "chopro/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace chopro {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Objective negative_loglik(const LogLikelihood& ll) {
  return [&ll](const Eigen::VectorXd& theta) -> double {
    try {
      return -ll.value(theta);
    } catch (const std::domain_error&) {
      // Non-SPD covariance or exploded cut-off along the search path:
      // reject the point, the line search backs off.
      return std::numeric_limits<double>::infinity();
    }
  };
}

LinearConstraints to_linear_constraints(const Model::LinearSystem& sys, int n_vars) {
  LinearConstraints con = LinearConstraints::none(n_vars);
  con.a_eq = sys.a_eq;
  con.b_eq = sys.b_eq;
  con.a_in = sys.a_in;
  con.b_in = sys.b_in;
  return con;
}

void flag_active_and_fill(EstimationResult& result, const Model& model,
                          const Eigen::MatrixXd* inv_hessian) {
  const int n = static_cast<int>(result.theta.size());
  result.std_errors.assign(n, kNan);
  result.se_available.assign(n, 0);

  std::vector<char> on_active(n, 0);
  const auto& sys = model.constraints();
  for (int row : result.active_inequality_indices) {
    for (int j = 0; j < n; ++j) {
      if (sys.a_in(row, j) != 0.0) on_active[j] = 1;
    }
  }
  if (inv_hessian == nullptr) return;
  for (int j = 0; j < n; ++j) {
    if (on_active[j]) continue;  // boundary estimate, no usable curvature
    const double var = (*inv_hessian)(j, j);
    if (std::isfinite(var) && var > 0.0) {
      result.std_errors[j] = std::sqrt(var);
      result.se_available[j] = 1;
    }
  }
}

void compute_standard_errors(EstimationResult& result, const LogLikelihood& ll,
                             const OptimizerConfig& config) {
  const Objective nll = negative_loglik(ll);
  const Eigen::MatrixXd hess = central_hessian(nll, result.theta, config.hessian_step);
  if (!hess.allFinite()) {
    result.se_note = "hessian_not_finite";
    flag_active_and_fill(result, ll.model(), nullptr);
    return;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(hess);
  if (llt.info() == Eigen::Success) {
    const Eigen::MatrixXd inv =
        llt.solve(Eigen::MatrixXd::Identity(hess.rows(), hess.cols()));
    flag_active_and_fill(result, ll.model(), &inv);
    return;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(hess);
  if (lu.isInvertible()) {
    const Eigen::MatrixXd inv = lu.inverse();
    result.se_note = "hessian_not_positive_definite";
    flag_active_and_fill(result, ll.model(), &inv);
    return;
  }
  result.se_note = "hessian_singular";
  flag_active_and_fill(result, ll.model(), nullptr);
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("optimizer: max_iterations must be >= 1");
  if (!(objective_tol > 0) || !(feasibility_tol > 0) || !(kkt_tol > 0) || !(fd_step > 0) ||
      !(hessian_step > 0)) {
    throw std::invalid_argument("optimizer: all tolerances must be > 0");
  }
  if (plan.n_draws < 1 || plan.skip < 0) {
    throw std::invalid_argument("optimizer: bad draw plan");
  }
}

double aic(double loglik, int n_free_params) { return 2.0 * n_free_params - 2.0 * loglik; }

EstimationResult estimate(const ChoiceDataset& data, const UtilitySpec& spec,
                          const ErrorStructure& err, const OptimizerConfig& config) {
  config.validate();
  LogLikelihood ll(data, spec, err, config.plan);
  const Model& model = ll.model();

  SqpOptions sqp_opt;
  sqp_opt.max_iterations = config.max_iterations;
  sqp_opt.objective_tol = config.objective_tol;
  sqp_opt.feasibility_tol = config.feasibility_tol;
  sqp_opt.kkt_tol = config.kkt_tol;
  sqp_opt.fd_step = config.fd_step;

  const LinearConstraints con = to_linear_constraints(model.constraints(), model.n_params());
  const Eigen::VectorXd x0 = model.feasible_start(data);
  const SqpResult sr = sqp_minimize(negative_loglik(ll), x0, con, sqp_opt);

  EstimationResult result;
  result.theta = sr.x;
  result.packing = model.packing();
  result.param_names = model.param_names();
  result.loglik = -sr.f;
  result.n_free_params = model.n_params();
  result.aic_value = aic(result.loglik, result.n_free_params);
  result.n_iterations = sr.iterations;
  result.convergence_status = to_string(sr.status);
  result.converged = sr.converged();
  result.kkt_residual = sr.kkt_residual;
  result.active_inequality_indices = sr.active_inequalities;
  for (int idx : sr.active_inequalities) {
    result.active_constraints.push_back(model.constraints().inequality_labels[idx]);
  }
  result.loglik_trace.reserve(sr.objective_trace.size());
  for (double f : sr.objective_trace) result.loglik_trace.push_back(-f);

  if (config.compute_std_errors) {
    compute_standard_errors(result, ll, config);
  } else {
    flag_active_and_fill(result, model, nullptr);
  }
  return result;
}

std::vector<double> standard_errors(EstimationResult& result, const ChoiceDataset& data,
                                    const UtilitySpec& spec, const ErrorStructure& err,
                                    const OptimizerConfig& config) {
  LogLikelihood ll(data, spec, err, config.plan);
  compute_standard_errors(result, ll, config);
  return result.std_errors;
}

}  // namespace chopro
