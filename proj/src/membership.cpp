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

#include "chopro/membership.hpp"

#include <cmath>
#include <stdexcept>

namespace chopro {

MembershipSpec MembershipSpec::minmax(Direction dir) {
  MembershipSpec s;
  s.kind = Kind::MinMaxRange;
  s.direction = dir;
  return s;
}

MembershipSpec MembershipSpec::half_triangular_increasing(double a, double b) {
  MembershipSpec s;
  s.kind = Kind::HalfTriangularIncreasing;
  s.a = a;
  s.b = b;
  s.validate();
  return s;
}

MembershipSpec MembershipSpec::half_triangular_decreasing(double a, double b) {
  MembershipSpec s;
  s.kind = Kind::HalfTriangularDecreasing;
  s.a = a;
  s.b = b;
  s.validate();
  return s;
}

MembershipSpec MembershipSpec::trapezoidal(double a, double b, double c, double d) {
  MembershipSpec s;
  s.kind = Kind::Trapezoidal;
  s.a = a;
  s.b = b;
  s.c = c;
  s.d = d;
  s.validate();
  return s;
}

void MembershipSpec::validate() const {
  switch (kind) {
    case Kind::MinMaxRange:
      return;
    case Kind::HalfTriangularIncreasing:
    case Kind::HalfTriangularDecreasing:
      if (!(a < b)) throw std::invalid_argument("half-triangular membership requires a < b");
      return;
    case Kind::Trapezoidal:
      if (!(a <= b && b <= c && c <= d && a < d)) {
        throw std::invalid_argument("trapezoidal membership requires a <= b <= c <= d, a < d");
      }
      return;
  }
  throw std::logic_error("unreachable membership kind");
}

std::vector<double> normalize_minmax(std::span<const double> values, Direction dir) {
  if (values.size() < 2) {
    throw std::invalid_argument("normalize_minmax: need at least two alternatives");
  }
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> out(values.size());
  const double range = hi - lo;
  if (range == 0.0) {
    // Degenerate range: any constant works since equal entries cancel in
    // utility differences; 0.5 is symmetric between directions.
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (dir == Direction::Positive) ? (values[i] - lo) / range
                                          : (hi - values[i]) / range;
  }
  return out;
}

double membership_value(double x, const MembershipSpec& spec) {
  switch (spec.kind) {
    case MembershipSpec::Kind::MinMaxRange:
      throw std::invalid_argument("membership_value: MinMaxRange needs the full task row");
    case MembershipSpec::Kind::HalfTriangularIncreasing:
      if (x <= spec.a) return 0.0;
      if (x <= spec.b) return (x - spec.a) / (spec.b - spec.a);
      return 1.0;
    case MembershipSpec::Kind::HalfTriangularDecreasing:
      if (x <= spec.a) return 1.0;
      if (x <= spec.b) return (spec.b - x) / (spec.b - spec.a);
      return 0.0;
    case MembershipSpec::Kind::Trapezoidal:
      if (x <= spec.a || x > spec.d) return 0.0;
      if (x <= spec.b) return spec.b > spec.a ? (x - spec.a) / (spec.b - spec.a) : 1.0;
      if (x <= spec.c) return 1.0;
      return (spec.d - x) / (spec.d - spec.c);
  }
  throw std::logic_error("unreachable membership kind");
}

int CutoffParameterization::n_params() const {
  int n = static_cast<int>(lower_covariates.size() + upper_covariates.size());
  if (kind == Kind::Trapezoidal) {
    n += static_cast<int>(c_covariates.size() + d_covariates.size());
  }
  return n;
}

void CutoffParameterization::validate() const {
  if (lower_covariates.empty() || upper_covariates.empty()) {
    throw std::invalid_argument("cut-off parameterization needs lower and upper covariates");
  }
  if (kind == Kind::Trapezoidal && (c_covariates.empty() || d_covariates.empty())) {
    throw std::invalid_argument("trapezoidal cut-off parameterization needs c and d covariates");
  }
  if (kind != Kind::Trapezoidal && (!c_covariates.empty() || !d_covariates.empty())) {
    throw std::invalid_argument("c/d covariates only apply to trapezoidal cut-offs");
  }
}

double cutoff_gap(std::span<const double> coeffs, std::span<const double> z) {
  if (coeffs.size() != z.size()) {
    throw std::invalid_argument("cut-off covariate length mismatch");
  }
  double lin = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) lin += coeffs[i] * z[i];
  const double g = std::exp(lin);
  if (!std::isfinite(g)) {
    throw std::domain_error("non-finite cut-off gap");
  }
  return g;
}

std::pair<double, double> resolve_cutoffs(const CutoffParameterization& p,
                                          std::span<const double> z_lower,
                                          std::span<const double> z_upper) {
  const double lower = cutoff_gap(p.lower_coeffs, z_lower);
  const double upper = lower + cutoff_gap(p.upper_coeffs, z_upper);
  return {lower, upper};
}

MembershipSpec resolve_membership(const CutoffParameterization& p,
                                  std::span<const double> z_lower,
                                  std::span<const double> z_upper,
                                  std::span<const double> z_c,
                                  std::span<const double> z_d) {
  const auto [lower, upper] = resolve_cutoffs(p, z_lower, z_upper);
  switch (p.kind) {
    case CutoffParameterization::Kind::HalfTriangularIncreasing:
      return MembershipSpec::half_triangular_increasing(lower, upper);
    case CutoffParameterization::Kind::HalfTriangularDecreasing:
      return MembershipSpec::half_triangular_decreasing(lower, upper);
    case CutoffParameterization::Kind::Trapezoidal: {
      const double c = upper + cutoff_gap(p.c_coeffs, z_c);
      const double d = c + cutoff_gap(p.d_coeffs, z_d);
      return MembershipSpec::trapezoidal(lower, upper, c, d);
    }
  }
  throw std::logic_error("unreachable cut-off kind");
}

}  // namespace chopro
