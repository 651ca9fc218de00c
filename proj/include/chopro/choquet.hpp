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

#ifndef CHOPRO_CHOQUET_HPP
#define CHOPRO_CHOQUET_HPP

#include <span>
#include <string>
#include <vector>

#include "chopro/fuzzy.hpp"
#include "chopro/membership.hpp"

namespace chopro {

// Choquet integral of normalized attribute values x (each in [0,1])
// against a capacity: attributes are visited in descending value order
// (ties broken by ascending index, which is irrelevant by telescoping)
// and weighted by the capacity increments of the accumulated coalition.
// O(G log G); throws on dimension mismatch.
double choquet_integral(std::span<const double> x, const Capacity& mu);

// How one attribute is normalized for a set of alternatives.
struct NormalizationRule {
  enum class Kind {
    MinMax,            // task-level range normalization, no parameters
    FixedMembership,   // known membership function, no parameters
    EstimatedCutoffs,  // cut-off points estimated (demographics-linked)
  };

  Kind kind = Kind::MinMax;
  // Alternatives this rule applies to (1-based ids); empty = all.
  std::vector<int> alternatives;

  Direction direction = Direction::Positive;  // MinMax only
  MembershipSpec membership;                  // FixedMembership only
  CutoffParameterization cutoffs;             // EstimatedCutoffs only
};

// One attribute entering the Choquet component (or a weighted-sum
// component on normalized values), with its normalization rule(s).
struct NormalizedAttribute {
  std::string name;  // dataset column
  std::vector<NormalizationRule> rules;
};

// Partition of alternatives into capacity groups.  Generic mode keeps a
// single capacity for all alternatives.
struct CapacityMode {
  bool alternative_specific = false;
  std::vector<std::vector<int>> groups;  // 1-based alternative ids

  int n_groups(int n_alternatives) const {
    return alternative_specific ? static_cast<int>(groups.size()) : 1;
  }
};

// Scale factor multiplying the Choquet component; either pinned or
// estimated through a log-link (one extra parameter).
struct CiScale {
  bool estimated = false;
  double fixed_value = 1.0;
};

// Full systematic-utility layout:
//   V_i = sum_c beta_{i,c} w_{i,c}            (weighted-sum part)
//       + sum_a gamma_a xN_{i,a}              (linear part on normalized values)
//       + lambda * CI_i(xN_i; mu_group(i))    (Choquet part)
// The first alternative carries no alternative-specific constant.
struct UtilitySpec {
  int n_alternatives = 0;
  // Weighted-sum covariate names per alternative (index 0 = alternative 1).
  // "const" denotes the alternative-specific constant.
  std::vector<std::vector<std::string>> ws_covariates;
  // Plain linear coefficients on normalized attributes (generic across
  // alternatives); lets a weighted-sum model reuse the same normalization
  // machinery as the Choquet part.
  std::vector<NormalizedAttribute> linear_attributes;
  // Attributes aggregated by the Choquet integral.
  std::vector<NormalizedAttribute> ci_attributes;
  CapacityMode capacity_mode;
  CiScale ci_scale;

  int n_ci_attributes() const { return static_cast<int>(ci_attributes.size()); }
  int n_capacity_groups() const {
    return ci_attributes.empty() ? 0 : capacity_mode.n_groups(n_alternatives);
  }
  // 0-based group index for a 1-based alternative id.
  int group_of_alternative(int alt) const;

  // Structural checks: alternative coverage of rules and capacity groups,
  // no constant on the first alternative, at least one utility component.
  void validate() const;
};

}  // namespace chopro

#endif  // CHOPRO_CHOQUET_HPP
