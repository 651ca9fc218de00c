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

#ifndef CHOPRO_MNP_HPP
#define CHOPRO_MNP_HPP

#include <span>
#include <vector>

#include <Eigen/Core>

namespace chopro {

// Utility-differencing matrix M of size (I-1) x I for a chosen alternative
// (1-based): M * U = (U_j - U_chosen) for j != chosen, ordered by the
// original alternative index.  Entries are -1 on the chosen column and an
// identity on the rest.
Eigen::MatrixXd differencing_matrix(int n_alternatives, int chosen);

// Row-normalizing reparameterization of a lower-triangular Cholesky factor
// with L(0,0) = 1: a_i = sqrt(1 + sum_{r<i} L(i,r)^2), off-diagonals divided
// by a_i, diagonal replaced by 1/a_i.  Every row of the result has unit
// Euclidean norm, so Lp * Lp' has a unit diagonal.
Eigen::MatrixXd reparam_cholesky_rownorm(const Eigen::MatrixXd& L);

// Quasi-random plan for the GHK simulator.  Dimension j of the integration
// uses the radical-inverse sequence in the j-th prime base; the first
// `skip` points of each sequence are discarded.  One common block of
// n_draws points is shared by all observations (common random numbers)
// unless per_observation_offset is nonzero, in which case observation t
// starts at offset t * per_observation_offset within the sequences.
struct HaltonPlan {
  int n_draws = 500;
  int skip = 100;
  int per_observation_offset = 0;

  // n_draws x dims matrix of uniforms in (0,1) for observation block
  // `observation` (0 unless per-observation offsets are in use).
  Eigen::MatrixXd draws(int dims, int observation = 0) const;
};

// Identified parameterizations of the differenced error covariance
// (chosen alternative 1 as reference), all of size (I-1) x (I-1):
//  - IID: fixed at 1 on the diagonal, 0.5 off (unit-variance utilities).
//  - Diagonal: off-diagonals fixed at 0.5, diagonals free except the
//    first (log-link); free_params has I-2 entries.
//  - Full + FreeCholeskyTopLeftFixed: lower Cholesky with L(0,0) = 1,
//    strict lower entries free, diagonals through a log-link;
//    free_params has (I-2)(I+1)/2 entries, row-major from row 2.
//  - Full + PaperRowNormalized: strict lower entries of rows 2.. are free
//    and the factor is row-normalized, which forces a unit diagonal;
//    free_params has (I-1)(I-2)/2 entries.
struct ErrorStructure {
  enum class Kind { IID, Diagonal, Full };
  enum class Parameterization { FreeCholeskyTopLeftFixed, PaperRowNormalized };

  Kind kind = Kind::IID;
  Parameterization parameterization = Parameterization::FreeCholeskyTopLeftFixed;
  int n_alternatives = 0;
  std::vector<double> free_params;

  int n_free_params() const;
  std::vector<std::string> param_names() const;
  // The differenced covariance for chosen alternative 1.  Throws if
  // free_params has the wrong length.
  Eigen::MatrixXd base_differenced_cov() const;
  Eigen::MatrixXd base_differenced_cov(std::span<const double> params) const;
  // Free parameters that reproduce a given base covariance (used to seed
  // the optimizer and to encode a true covariance).  IID accepts only its
  // fixed matrix; Diagonal requires off-diagonals of 0.5.
  std::vector<double> encode(const Eigen::MatrixXd& base_cov) const;
};

// Differenced covariance for an arbitrary chosen alternative, derived from
// the base (chosen = 1) matrix through the common undifferenced covariance
// Lambda = [[0,0],[0,base]].  `available` restricts to a subset of
// alternatives (1-based ids, ascending, containing `chosen`).
Eigen::MatrixXd differenced_cov_for_chosen(const Eigen::MatrixXd& base_cov, int chosen,
                                           std::span<const int> available = {});

// GHK estimate of P(Z <= upper), Z ~ N(0, cov), using the plan's Halton
// block.  Deterministic given the plan.  Throws if cov is not SPD.
double mvncdf_ghk(const Eigen::VectorXd& upper, const Eigen::MatrixXd& cov,
                  const HaltonPlan& plan);

// Core GHK recursion on a precomputed Cholesky factor and uniform block
// (n_draws x at-least-(d-1)).  Exposed for reuse inside the likelihood.
double ghk_prob(const Eigen::MatrixXd& chol_lower, const Eigen::VectorXd& upper,
                const Eigen::MatrixXd& uniforms);

// MNP choice probability: P(chosen | V) = Phi_{I-1}(-M V; M Lambda M'),
// the probability that every difference (non-chosen minus chosen) is
// non-positive.
double choice_probability(const Eigen::VectorXd& systematic_utilities, int chosen,
                          const ErrorStructure& err, const HaltonPlan& plan);

}  // namespace chopro

#endif  // CHOPRO_MNP_HPP
