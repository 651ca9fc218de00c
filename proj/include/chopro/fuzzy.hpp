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

#ifndef CHOPRO_FUZZY_HPP
#define CHOPRO_FUZZY_HPP

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chopro/subset.hpp"

namespace chopro {

// A discrete fuzzy measure (capacity) over subsets of g attributes: a
// normalized, monotone set function with mu(empty) = 0 and mu(full) = 1.
// values is a dense lattice of length 2^g indexed by SubsetId.
struct Capacity {
  int g = 0;
  std::vector<double> values;

  double at(SubsetId s) const { return values[s]; }
  SubsetId full_set() const { return (SubsetId{1} << g) - 1; }

  // Throws std::invalid_argument when a structural invariant fails
  // (boundary values, monotonicity within `tol`, entries outside [0,1]).
  void validate(double tol = 1e-10) const;
  bool is_monotone(double tol = 1e-10) const;

  // Additive capacity with the given singleton weights (must sum to 1 for
  // a valid capacity; the sum is not checked here).
  static Capacity additive(const std::vector<double>& singleton_weights);
  // The strictly feasible default: additive with singletons 1/g.
  static Capacity uniform_additive(int g);
  // Build from subset-label keyed values ("" optional, full set required).
  static Capacity from_labels(int g, const std::map<std::string, double>& mu);
};

// The Mobius (alternating-sum) representation of a capacity.  values[0]
// (the empty set) is identically zero.
struct MobiusVector {
  int g = 0;
  std::vector<double> values;

  double at(SubsetId s) const { return values[s]; }
  SubsetId full_set() const { return (SubsetId{1} << g) - 1; }

  static MobiusVector zeros(int g);
  static MobiusVector from_labels(int g, const std::map<std::string, double>& m);
};

// One linear row: coeffs . x (>= or ==) rhs over the 2^g - 1 nonempty
// subset variables.  Variable j corresponds to SubsetId j+1.
struct LinearRowSpec {
  std::vector<double> coeffs;
  double rhs = 0.0;
  // For inequalities: the defining (attribute k, conditioning set H).
  int attribute = -1;
  SubsetId conditioning_set = 0;
};

// The linear system that makes a Mobius vector a valid capacity:
// one equality (total mass 1) plus g * 2^(g-1) monotonicity inequalities,
// each of the form sum_{K subseteq H} m(K u {k}) >= 0.
struct ConstraintSystem {
  int n_vars = 0;
  LinearRowSpec equality;
  std::vector<LinearRowSpec> inequalities;
};

// mu(F) = sum_{H subseteq F} m(H).  Throws on dimension mismatch.
Capacity mobius_to_capacity(const MobiusVector& m);

// m(H) = sum_{F subseteq H} (-1)^{|H \ F|} mu(F).  Exact inverse of the
// zeta transform above.
MobiusVector capacity_to_mobius(const Capacity& mu);

// Throws std::invalid_argument unless 1 <= g <= kMaxAttributes.
ConstraintSystem build_constraints(int g);

// Whether the Mobius vector satisfies the constraint system within tol.
bool satisfies_constraints(const MobiusVector& m, const ConstraintSystem& cs,
                           double tol = 1e-10);

// Average marginal contribution of each attribute over all coalitions.
// Sums to mu(full set).
std::vector<double> shapley(const Capacity& mu);

// Pairwise interaction index; positive = complementary, negative =
// redundant.  q and w are 0-based attribute indices; throws if q == w.
double interaction_pair(const Capacity& mu, int q, int w);

// Interaction index of an attribute coalition; reduces to the Shapley
// value for singletons and to interaction_pair for pairs.  Throws on the
// empty set.
double interaction_group(const Capacity& mu, SubsetId b);

// JSON form: object keyed by subset label ("1,3" etc., "" for the empty
// set), 1-based ascending attribute indices.
nlohmann::ordered_json capacity_to_json(const Capacity& mu);
Capacity capacity_from_json(const nlohmann::json& j, int g);
nlohmann::ordered_json mobius_to_json(const MobiusVector& m);
MobiusVector mobius_from_json(const nlohmann::json& j, int g);

}  // namespace chopro

#endif  // CHOPRO_FUZZY_HPP
