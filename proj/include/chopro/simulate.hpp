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

#ifndef CHOPRO_SIMULATE_HPP
#define CHOPRO_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chopro/estimator.hpp"

namespace chopro {

// Data-generating process: uniform attributes, alternative-specific
// constants, a Choquet (or weighted-sum) systematic utility on normalized
// attributes, and jointly normal noise drawn in differenced form through
// Lambda = [[0,0],[0,base_cov]].
struct DgpConfig {
  enum class Utility { ChoquetIntegral, WeightedSum };

  Utility utility = Utility::ChoquetIntegral;
  int n_individuals = 1500;
  int n_alternatives = 5;
  std::vector<std::string> attribute_names;
  double attribute_low = 1.0;
  double attribute_high = 10.0;
  Capacity true_capacity;           // ChoquetIntegral only
  std::vector<double> true_betas;   // WeightedSum only
  std::vector<double> ascs;         // length n_alternatives, first entry 0
  // Fixed membership cut-offs per attribute; empty means plain min-max
  // normalization (positive direction) for every attribute.
  std::vector<MembershipSpec> cutoffs;
  // Differenced error covariance (I-1 square); empty means IID.
  Eigen::MatrixXd error_cov;
  std::uint64_t seed = 1;

  int n_attributes() const { return static_cast<int>(attribute_names.size()); }
  void validate() const;
};

struct GeneratedDataset {
  ChoiceDataset data;
  UtilitySpec dgp_spec;
  ErrorStructure dgp_err;
  Eigen::VectorXd dgp_theta;  // packed truth under dgp_spec
};

// Deterministic in (cfg.seed, replication); the chosen alternative is the
// argmax of systematic utility plus correlated noise.
GeneratedDataset generate_dataset(const DgpConfig& cfg, int replication);

// The spec/error structure the DGP itself uses (min-max or fixed
// memberships, constants on alternatives 2..I).
UtilitySpec dgp_utility_spec(const DgpConfig& cfg);
ErrorStructure dgp_error_structure(const DgpConfig& cfg);

// Packed truth for an estimation model fitted to this DGP.  Cut-off points
// map onto constant-only log-link coefficients; a weighted-sum DGP maps
// onto an additive capacity with the scale factor absorbing the total mass
// (requires an estimated scale unless the betas already sum to 1).  Throws
// std::invalid_argument when the model cannot represent the DGP exactly.
Eigen::VectorXd true_theta_for(const Model& model, const DgpConfig& cfg);

// Mean absolute error over replications and parameters, divided by the
// sample standard deviation of the true values within the group.
// estimates is replications x parameters.  Throws when the group has
// fewer than two parameters or zero spread.
double sdmae(std::span<const double> truth, const Eigen::MatrixXd& estimates);

// Absolute percentage bias, averaged over replications and parameters,
// skipping parameters whose true value is exactly zero.  NaN when every
// true value is zero.
double apb(std::span<const double> truth, const Eigen::MatrixXd& estimates);

// Share of replications whose 95% interval est +- 1.96 se covers truth.
double coverage_probability(double truth, std::span<const double> estimates,
                            std::span<const double> std_errors);

// |mean_true - mean_est| / sqrt(std_true^2 + std_est^2); passes under 1.96.
double marginal_effect_ttest(double mean_true, double std_true, double mean_est,
                             double std_est);

// Distribution of per-observation choice-probability changes after scaling
// one attribute by (1 + pct_change) on the target alternatives (all when
// empty).
struct MarginalEffectSummary {
  std::vector<double> quantiles;
  Eigen::MatrixXd prob_change_quantiles;  // n_alternatives x n_quantiles
  Eigen::VectorXd mean_change;            // per alternative
  Eigen::VectorXd std_change;             // per alternative (sample std)
};
MarginalEffectSummary marginal_effects(const Model& model, const Eigen::VectorXd& theta,
                                       const ChoiceDataset& data, const HaltonPlan& plan,
                                       const std::string& attribute, double pct_change,
                                       std::span<const int> target_alternatives = {},
                                       std::span<const double> quantiles = {});

// Choice probability of every alternative of one task (zero for
// unavailable rows), used by the marginal-effect machinery and tests.
Eigen::VectorXd task_choice_probabilities(const Model& model, const ModelContext& ctx,
                                          const Eigen::MatrixXd& base_cov,
                                          const ChoiceTask& task,
                                          const Eigen::MatrixXd& uniforms);

struct MonteCarloGroupStats {
  std::string name;
  int n_params = 0;
  double sdmae_value = 0.0;
  double apb_value = 0.0;
  double cp = 0.0;
  int cp_cells = 0;
  int cp_excluded = 0;
};

struct MonteCarloReplicationInfo {
  int replication = 0;
  bool success = false;
  std::string status;
  double loglik = 0.0;
  double aic_value = 0.0;
};

struct MonteCarloReport {
  int requested_replications = 0;
  int completed = 0;
  int failed = 0;
  std::vector<MonteCarloGroupStats> groups;
  double mean_abs_interaction = 0.0;  // NaN without a Choquet component
  double me_ttest_pass_proportion = 0.0;  // NaN when t-tests were not run
  int me_cells = 0;
  std::vector<MonteCarloReplicationInfo> replications;
};

struct MonteCarloOptions {
  int replications = 10;
  // Percentage change per attribute for the marginal-effect t-tests;
  // empty disables them.
  std::vector<double> me_pct_changes;
};

// Generate-estimate-aggregate loop; replications run independently (in
// parallel when OpenMP is available) and are aggregated in index order, so
// the report is deterministic.  Estimation exceptions are recorded and
// excluded, never silently dropped.
MonteCarloReport run_monte_carlo(const DgpConfig& cfg, const UtilitySpec& est_spec,
                                 const ErrorStructure& est_err,
                                 const OptimizerConfig& opt_config,
                                 const MonteCarloOptions& mc);

}  // namespace chopro

#endif  // CHOPRO_SIMULATE_HPP
