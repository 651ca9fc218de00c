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

#include "chopro/mnp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "chopro/stats.hpp"

namespace chopro {

namespace {
constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
constexpr int kNumPrimes = static_cast<int>(sizeof(kPrimes) / sizeof(kPrimes[0]));

// Probability clamp mirroring common GHK practice: keeps the conditional
// quantile finite at extreme truncation points.
constexpr double kProbFloor = 1e-10;
constexpr double kProbCeil = 1.0 - 1e-10;

// Stack bound on the integration dimension (I - 1).
constexpr int kMaxGhkDim = 32;

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("covariance matrix is not symmetric positive definite");
  }
  return llt.matrixL();
}
}  // namespace

Eigen::MatrixXd differencing_matrix(int n_alternatives, int chosen) {
  const int I = n_alternatives;
  if (I < 2) throw std::invalid_argument("differencing_matrix: need at least 2 alternatives");
  if (chosen < 1 || chosen > I) {
    throw std::invalid_argument("differencing_matrix: chosen index " + std::to_string(chosen) +
                                " out of range 1.." + std::to_string(I));
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(I - 1, I);
  // Identity columns on the non-chosen alternatives, -1 on the chosen one.
  m.col(chosen - 1).setConstant(-1.0);
  int row = 0;
  for (int j = 0; j < I; ++j) {
    if (j == chosen - 1) continue;
    m(row++, j) = 1.0;
  }
  return m;
}

Eigen::MatrixXd reparam_cholesky_rownorm(const Eigen::MatrixXd& L) {
  const auto n = L.rows();
  if (L.cols() != n || n < 1) throw std::invalid_argument("reparam_cholesky_rownorm: square input");
  Eigen::MatrixXd lp = Eigen::MatrixXd::Zero(n, n);
  lp(0, 0) = 1.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    double ss = 1.0;
    for (Eigen::Index r = 0; r < i; ++r) ss += L(i, r) * L(i, r);
    const double a = std::sqrt(ss);
    for (Eigen::Index r = 0; r < i; ++r) lp(i, r) = L(i, r) / a;
    lp(i, i) = 1.0 / a;
  }
  return lp;
}

Eigen::MatrixXd HaltonPlan::draws(int dims, int observation) const {
  if (dims > kNumPrimes) {
    throw std::invalid_argument("halton plan: dimension exceeds available prime bases");
  }
  Eigen::MatrixXd u(n_draws, std::max(dims, 0));
  const int offset = skip + observation * per_observation_offset;
  for (int j = 0; j < dims; ++j) {
    const auto seq = halton_sequence(kPrimes[j], offset, n_draws);
    for (int r = 0; r < n_draws; ++r) u(r, j) = seq[r];
  }
  return u;
}

int ErrorStructure::n_free_params() const {
  const int I = n_alternatives;
  switch (kind) {
    case Kind::IID:
      return 0;
    case Kind::Diagonal:
      return I - 2;
    case Kind::Full:
      return parameterization == Parameterization::FreeCholeskyTopLeftFixed
                 ? (I - 2) * (I + 1) / 2
                 : (I - 1) * (I - 2) / 2;
  }
  throw std::logic_error("unreachable error kind");
}

std::vector<std::string> ErrorStructure::param_names() const {
  std::vector<std::string> names;
  const int I = n_alternatives;
  switch (kind) {
    case Kind::IID:
      break;
    case Kind::Diagonal:
      for (int i = 2; i <= I - 1; ++i) names.push_back("err.log_d" + std::to_string(i));
      break;
    case Kind::Full:
      for (int i = 2; i <= I - 1; ++i) {
        for (int r = 1; r < i; ++r) {
          names.push_back("err.L" + std::to_string(i) + std::to_string(r));
        }
        if (parameterization == Parameterization::FreeCholeskyTopLeftFixed) {
          names.push_back("err.log_L" + std::to_string(i) + std::to_string(i));
        }
      }
      break;
  }
  return names;
}

Eigen::MatrixXd ErrorStructure::base_differenced_cov() const {
  return base_differenced_cov(free_params);
}

Eigen::MatrixXd ErrorStructure::base_differenced_cov(std::span<const double> params) const {
  const int d = n_alternatives - 1;
  if (d < 1) throw std::invalid_argument("error structure: need at least 2 alternatives");
  if (static_cast<int>(params.size()) != n_free_params()) {
    throw std::invalid_argument("error structure: expected " + std::to_string(n_free_params()) +
                                " free parameters, got " + std::to_string(params.size()));
  }
  switch (kind) {
    case Kind::IID: {
      Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(d, d, 0.5);
      cov.diagonal().setOnes();
      return cov;
    }
    case Kind::Diagonal: {
      Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(d, d, 0.5);
      cov(0, 0) = 1.0;
      for (int i = 1; i < d; ++i) cov(i, i) = std::exp(params[i - 1]);
      return cov;
    }
    case Kind::Full: {
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d, d);
      L(0, 0) = 1.0;
      std::size_t p = 0;
      for (int i = 1; i < d; ++i) {
        for (int r = 0; r < i; ++r) L(i, r) = params[p++];
        if (parameterization == Parameterization::FreeCholeskyTopLeftFixed) {
          L(i, i) = std::exp(params[p++]);
        }
      }
      if (parameterization == Parameterization::PaperRowNormalized) {
        L = reparam_cholesky_rownorm(L);
      }
      return L * L.transpose();
    }
  }
  throw std::logic_error("unreachable error kind");
}

std::vector<double> ErrorStructure::encode(const Eigen::MatrixXd& base_cov) const {
  const int d = n_alternatives - 1;
  if (base_cov.rows() != d || base_cov.cols() != d) {
    throw std::invalid_argument("error structure: covariance size mismatch");
  }
  const double tol = 1e-9;
  if (std::abs(base_cov(0, 0) - 1.0) > tol) {
    throw std::invalid_argument("error structure: top-left element must be 1");
  }
  std::vector<double> params;
  switch (kind) {
    case Kind::IID: {
      const Eigen::MatrixXd expect = base_differenced_cov(std::span<const double>{});
      if ((base_cov - expect).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("IID error structure cannot represent this covariance");
      }
      return params;
    }
    case Kind::Diagonal: {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
          if (std::abs(base_cov(i, j) - 0.5) > tol) {
            throw std::invalid_argument(
                "diagonal error structure requires off-diagonals of 0.5");
          }
        }
      }
      for (int i = 1; i < d; ++i) params.push_back(std::log(base_cov(i, i)));
      return params;
    }
    case Kind::Full: {
      if (parameterization != Parameterization::FreeCholeskyTopLeftFixed) {
        throw std::invalid_argument("encode: only the free-Cholesky map is invertible in general");
      }
      const Eigen::MatrixXd L = cholesky_lower(base_cov);
      for (int i = 1; i < d; ++i) {
        for (int r = 0; r < i; ++r) params.push_back(L(i, r));
        params.push_back(std::log(L(i, i)));
      }
      return params;
    }
  }
  throw std::logic_error("unreachable error kind");
}

Eigen::MatrixXd differenced_cov_for_chosen(const Eigen::MatrixXd& base_cov, int chosen,
                                           std::span<const int> available) {
  const int I = static_cast<int>(base_cov.rows()) + 1;
  // Common undifferenced covariance with alternative 1 as the zero-variance
  // reference: Lambda = [[0,0],[0,base]].
  Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(I, I);
  lambda.bottomRightCorner(I - 1, I - 1) = base_cov;

  std::vector<int> alts;
  if (available.empty()) {
    alts.resize(I);
    for (int i = 0; i < I; ++i) alts[i] = i + 1;
  } else {
    alts.assign(available.begin(), available.end());
  }
  const int n = static_cast<int>(alts.size());
  int chosen_pos = -1;
  for (int i = 0; i < n; ++i) {
    if (alts[i] == chosen) chosen_pos = i + 1;
  }
  if (chosen_pos < 0) {
    throw std::invalid_argument("differenced_cov_for_chosen: chosen alternative unavailable");
  }
  Eigen::MatrixXd sub(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sub(i, j) = lambda(alts[i] - 1, alts[j] - 1);
  }
  const Eigen::MatrixXd m = differencing_matrix(n, chosen_pos);
  return m * sub * m.transpose();
}

double ghk_prob(const Eigen::MatrixXd& chol_lower, const Eigen::VectorXd& upper,
                const Eigen::MatrixXd& uniforms) {
  const int d = static_cast<int>(upper.size());
  if (d == 0) return 1.0;
  if (d == 1) return norm_cdf(upper[0] / chol_lower(0, 0));
  if (d > kMaxGhkDim) throw std::invalid_argument("ghk_prob: dimension too large");

  const int n_draws = static_cast<int>(uniforms.rows());
  double z[kMaxGhkDim];
  double total = 0.0;
  for (int r = 0; r < n_draws; ++r) {
    double prob = 1.0;
    for (int j = 0; j < d; ++j) {
      double mu = 0.0;
      for (int k = 0; k < j; ++k) mu += chol_lower(j, k) * z[k];
      const double t = (upper[j] - mu) / chol_lower(j, j);
      const double p = norm_cdf(t);
      prob *= p;
      if (j + 1 < d) {
        // Draw the truncated normal for conditioning the next dimension.
        double arg = uniforms(r, j) * p;
        arg = std::min(std::max(arg, kProbFloor), kProbCeil);
        z[j] = norm_ppf(arg);
      }
    }
    total += prob;
  }
  return total / n_draws;
}

double mvncdf_ghk(const Eigen::VectorXd& upper, const Eigen::MatrixXd& cov,
                  const HaltonPlan& plan) {
  const int d = static_cast<int>(upper.size());
  if (cov.rows() != d || cov.cols() != d) {
    throw std::invalid_argument("mvncdf_ghk: dimension mismatch");
  }
  if (d == 0) return 1.0;
  const Eigen::MatrixXd L = cholesky_lower(cov);
  if (d == 1) return norm_cdf(upper[0] / L(0, 0));
  return ghk_prob(L, upper, plan.draws(d - 1));
}

double choice_probability(const Eigen::VectorXd& v, int chosen, const ErrorStructure& err,
                          const HaltonPlan& plan) {
  const int I = static_cast<int>(v.size());
  if (!v.allFinite()) throw std::invalid_argument("choice_probability: non-finite utilities");
  if (err.n_alternatives != I) {
    throw std::invalid_argument("choice_probability: error structure alternative count mismatch");
  }
  const Eigen::MatrixXd m = differencing_matrix(I, chosen);
  const Eigen::VectorXd b = m * v;
  const Eigen::MatrixXd cov = differenced_cov_for_chosen(err.base_differenced_cov(), chosen);
  return mvncdf_ghk(-b, cov, plan);
}

}  // namespace chopro
