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

#ifndef CHOPRO_SQP_HPP
#define CHOPRO_SQP_HPP

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace chopro {

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Central-difference gradient with per-coordinate steps
// h_i = step * max(1, |x_i|).  Falls back to one-sided differences when a
// perturbed point evaluates non-finite.
Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x, double step);

// Central-difference Hessian (symmetric), same step rule.
Eigen::MatrixXd central_hessian(const Objective& f, const Eigen::VectorXd& x, double step);

// a_eq x = b_eq, a_in x >= b_in.  Either block may be empty (0 rows).
struct LinearConstraints {
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd a_in;
  Eigen::VectorXd b_in;

  static LinearConstraints none(int n_vars);
  bool empty() const { return a_eq.rows() == 0 && a_in.rows() == 0; }
};

// Step of one SQP iteration: minimize 1/2 d'Bd + g'd subject to
// a_eq d = 0 and a_in d >= -slack_in, solved by a primal active-set
// method (B must be positive definite, the start d = 0 feasible).
struct QpSolution {
  Eigen::VectorXd d;
  Eigen::VectorXd eq_multipliers;
  Eigen::VectorXd in_multipliers;  // full length, zero off the active set
  std::vector<int> active;
};
QpSolution solve_convex_qp(const Eigen::MatrixXd& b_mat, const Eigen::VectorXd& g,
                           const Eigen::MatrixXd& a_eq, const Eigen::MatrixXd& a_in,
                           const Eigen::VectorXd& slack_in);

struct SqpOptions {
  int max_iterations = 150;
  double objective_tol = 1e-7;    // relative improvement between accepted steps
  double feasibility_tol = 1e-8;
  double kkt_tol = 1e-3;          // infinity norm of the stationarity residual
  double fd_step = 1e-4;
  int max_line_search = 30;
};

enum class SqpStatus {
  ConvergedKkt,
  ConvergedSmallChange,
  IterationCap,
  LineSearchFailed,
};

const char* to_string(SqpStatus status);

struct SqpResult {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd gradient;
  SqpStatus status = SqpStatus::IterationCap;
  int iterations = 0;
  double kkt_residual = 0.0;
  std::vector<int> active_inequalities;
  std::vector<double> objective_trace;  // f after each accepted step

  bool converged() const {
    return status == SqpStatus::ConvergedKkt || status == SqpStatus::ConvergedSmallChange;
  }
};

// Minimize a smooth objective under linear constraints, starting from a
// feasible point: damped-BFGS model of the objective, active-set QP
// subproblem, Armijo backtracking on the objective (iterates stay feasible
// because the constraints are linear).  Throws std::invalid_argument when
// x0 is infeasible or f(x0) is not finite.
SqpResult sqp_minimize(const Objective& f, Eigen::VectorXd x0,
                       const LinearConstraints& constraints, const SqpOptions& options);

}  // namespace chopro

#endif  // CHOPRO_SQP_HPP
