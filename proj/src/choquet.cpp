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

#include "chopro/choquet.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace chopro {

double choquet_integral(std::span<const double> x, const Capacity& mu) {
  const int g = mu.g;
  if (static_cast<int>(x.size()) != g) {
    throw std::invalid_argument("choquet_integral: attribute count mismatch");
  }
  std::array<int, kMaxAttributes> order{};
  for (int i = 0; i < g; ++i) order[i] = i;
  std::sort(order.begin(), order.begin() + g, [&](int a, int b) {
    if (x[a] != x[b]) return x[a] > x[b];
    return a < b;
  });
  // Telescoped form: CI = sum_g (x_(g) - x_(g+1)) * mu(A_g), with A_g the
  // coalition of the g largest values and x_(G+1) = 0.
  double ci = 0.0;
  SubsetId coalition = 0;
  for (int r = 0; r < g; ++r) {
    coalition |= SubsetId{1} << order[r];
    const double next = (r + 1 < g) ? x[order[r + 1]] : 0.0;
    ci += (x[order[r]] - next) * mu.at(coalition);
  }
  return ci;
}

int UtilitySpec::group_of_alternative(int alt) const {
  if (!capacity_mode.alternative_specific) return 0;
  for (std::size_t k = 0; k < capacity_mode.groups.size(); ++k) {
    for (int a : capacity_mode.groups[k]) {
      if (a == alt) return static_cast<int>(k);
    }
  }
  throw std::invalid_argument("alternative " + std::to_string(alt) +
                              " not covered by any capacity group");
}

namespace {
void check_rule_coverage(const NormalizedAttribute& attr, int n_alternatives) {
  std::vector<int> covered(n_alternatives + 1, 0);
  for (const auto& rule : attr.rules) {
    if (rule.alternatives.empty()) {
      for (int a = 1; a <= n_alternatives; ++a) ++covered[a];
    } else {
      for (int a : rule.alternatives) {
        if (a < 1 || a > n_alternatives) {
          throw std::invalid_argument("attribute '" + attr.name +
                                      "': rule references alternative " + std::to_string(a));
        }
        ++covered[a];
      }
    }
    if (rule.kind == NormalizationRule::Kind::FixedMembership) rule.membership.validate();
    if (rule.kind == NormalizationRule::Kind::EstimatedCutoffs) rule.cutoffs.validate();
  }
  for (int a = 1; a <= n_alternatives; ++a) {
    if (covered[a] != 1) {
      throw std::invalid_argument("attribute '" + attr.name + "': alternative " +
                                  std::to_string(a) + " must be covered by exactly one rule");
    }
  }
}
}  // namespace

void UtilitySpec::validate() const {
  if (n_alternatives < 2) {
    throw std::invalid_argument("utility spec needs at least two alternatives");
  }
  if (!ws_covariates.empty() &&
      static_cast<int>(ws_covariates.size()) != n_alternatives) {
    throw std::invalid_argument("ws covariate lists must match the alternative count");
  }
  if (!ws_covariates.empty()) {
    for (const auto& name : ws_covariates[0]) {
      if (name == "const") {
        throw std::invalid_argument(
            "the first alternative carries no constant (identification)");
      }
    }
  }
  bool any_component = !ci_attributes.empty() || !linear_attributes.empty();
  for (const auto& cov : ws_covariates) any_component = any_component || !cov.empty();
  if (!any_component) {
    throw std::invalid_argument("utility spec has no systematic component");
  }
  if (static_cast<int>(ci_attributes.size()) > kMaxAttributes) {
    throw std::invalid_argument("too many Choquet attributes (max " +
                                std::to_string(kMaxAttributes) + ")");
  }
  for (const auto& attr : ci_attributes) check_rule_coverage(attr, n_alternatives);
  for (const auto& attr : linear_attributes) check_rule_coverage(attr, n_alternatives);
  if (capacity_mode.alternative_specific) {
    std::vector<int> covered(n_alternatives + 1, 0);
    for (const auto& grp : capacity_mode.groups) {
      for (int a : grp) {
        if (a < 1 || a > n_alternatives) {
          throw std::invalid_argument("capacity group references alternative " +
                                      std::to_string(a));
        }
        ++covered[a];
      }
    }
    for (int a = 1; a <= n_alternatives; ++a) {
      if (covered[a] != 1) {
        throw std::invalid_argument("capacity groups must partition the alternatives");
      }
    }
  }
}

}  // namespace chopro
