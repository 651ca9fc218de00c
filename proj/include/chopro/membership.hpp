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

#ifndef CHOPRO_MEMBERSHIP_HPP
#define CHOPRO_MEMBERSHIP_HPP

#include <span>
#include <string>
#include <vector>

namespace chopro {

// Whether larger raw values mean more utility (Positive) or less (Negative).
enum class Direction { Positive, Negative };

// A per-attribute normalization rule mapping raw values into [0,1].
//
//  - MinMaxRange: range normalization across the alternatives of one task.
//  - HalfTriangularIncreasing(a,b): 0 below a, linear up to 1 at b.
//  - HalfTriangularDecreasing(a,b): 1 up to a, linear down to 0 at b.
//  - Trapezoidal(a,b,c,d): 0 outside (a,d], linear flanks, 1 on (b,c].
//
// Breakpoint ties follow the half-open conventions of the piecewise
// definitions: the linear branch covers a < x <= b (and c < x <= d).
struct MembershipSpec {
  enum class Kind {
    MinMaxRange,
    HalfTriangularIncreasing,
    HalfTriangularDecreasing,
    Trapezoidal,
  };

  Kind kind = Kind::MinMaxRange;
  Direction direction = Direction::Positive;  // MinMaxRange only
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  static MembershipSpec minmax(Direction dir);
  static MembershipSpec half_triangular_increasing(double a, double b);
  static MembershipSpec half_triangular_decreasing(double a, double b);
  static MembershipSpec trapezoidal(double a, double b, double c, double d);

  void validate() const;  // throws std::invalid_argument on bad breakpoints
};

// Range normalization of one attribute across a task's alternatives.
// Positive: max -> 1, min -> 0; Negative reversed.  A degenerate range
// (all values equal) maps everything to 0.5; identical entries cancel in
// utility differences, so the constant is arbitrary.
std::vector<double> normalize_minmax(std::span<const double> values, Direction dir);

// Evaluate a fixed (non-MinMax) membership function at x.
double membership_value(double x, const MembershipSpec& spec);

// Demographic-linked cut-off points.  Each point is generated through a
// log-link of a linear index in the covariates (first covariate is the
// intercept, value 1), accumulated as positive gaps:
//   two-point:  lower = exp(lc.z),  upper = lower + exp(uc.z)
//   four-point: a = exp(ac.z), b = a + exp(bc.z), c = b + ..., d = c + ...
// so the ordering lower < upper (a < b <= c < d) holds for any finite
// coefficients.
struct CutoffParameterization {
  enum class Kind {
    HalfTriangularIncreasing,
    HalfTriangularDecreasing,
    Trapezoidal,
  };

  Kind kind = Kind::HalfTriangularDecreasing;
  // Covariate names per coefficient group; "const" denotes the intercept.
  // Two-point kinds use lower/upper; Trapezoidal uses all four groups
  // (lower = a, upper = b).
  std::vector<std::string> lower_covariates{"const"};
  std::vector<std::string> upper_covariates{"const"};
  std::vector<std::string> c_covariates;
  std::vector<std::string> d_covariates;
  // Coefficients, aligned with the name lists above.
  std::vector<double> lower_coeffs;
  std::vector<double> upper_coeffs;
  std::vector<double> c_coeffs;
  std::vector<double> d_coeffs;

  int n_params() const;
  void validate() const;
};

// One positive cut-off gap: exp(coeffs . z).  Throws std::domain_error on a
// non-finite linear index or overflowed gap.
double cutoff_gap(std::span<const double> coeffs, std::span<const double> z);

// Resolve the (lower, upper) raw-unit pair for one demographic profile.
// z_* are the covariate values aligned with the coefficient vectors.
// Throws on a non-finite linear index.
std::pair<double, double> resolve_cutoffs(const CutoffParameterization& p,
                                          std::span<const double> z_lower,
                                          std::span<const double> z_upper);

// Resolve the full membership function (two- or four-point) for one
// demographic profile; z groups follow lower/upper/c/d order.
MembershipSpec resolve_membership(const CutoffParameterization& p,
                                  std::span<const double> z_lower,
                                  std::span<const double> z_upper,
                                  std::span<const double> z_c,
                                  std::span<const double> z_d);

}  // namespace chopro

#endif  // CHOPRO_MEMBERSHIP_HPP
