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

#include "chopro/fuzzy.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace chopro {

namespace {

void check_g(int g) {
  if (g < 1 || g > kMaxAttributes) {
    throw std::invalid_argument("attribute count out of range 1.." +
                                std::to_string(kMaxAttributes) + ": " + std::to_string(g));
  }
}

void check_lattice(int g, std::size_t n) {
  check_g(g);
  if (n != (std::size_t{1} << g)) {
    throw std::invalid_argument("lattice length " + std::to_string(n) +
                                " does not match 2^" + std::to_string(g));
  }
}

// Exact factorials up to 20! fit in 64 bits; coefficients of the Shapley
// and interaction sums are formed as exact integer ratios and converted
// to double once.
constexpr std::uint64_t kFactorial[21] = {
    1ull, 1ull, 2ull, 6ull, 24ull, 120ull, 720ull, 5040ull, 40320ull,
    362880ull, 3628800ull, 39916800ull, 479001600ull, 6227020800ull,
    87178291200ull, 1307674368000ull, 20922789888000ull, 355687428096000ull,
    6402373705728000ull, 121645100408832000ull, 2432902008176640000ull};

double coalition_coeff(int n_total, int a, int b) {
  // (n - a - b)! a! / (n - b + 1)!
  return static_cast<double>(kFactorial[n_total - a - b]) *
         static_cast<double>(kFactorial[a]) /
         static_cast<double>(kFactorial[n_total - b + 1]);
}

}  // namespace

void Capacity::validate(double tol) const {
  check_lattice(g, values.size());
  if (std::abs(values[0]) > tol) {
    throw std::invalid_argument("capacity: mu(empty) must be 0");
  }
  if (std::abs(values[full_set()] - 1.0) > tol) {
    throw std::invalid_argument("capacity: mu(full set) must be 1");
  }
  for (double v : values) {
    if (!(v >= -tol && v <= 1.0 + tol)) {
      throw std::invalid_argument("capacity: value outside [0,1]");
    }
  }
  if (!is_monotone(tol)) {
    throw std::invalid_argument("capacity: monotonicity violated");
  }
}

bool Capacity::is_monotone(double tol) const {
  const std::size_t n = values.size();
  // A <= A u {i} for every i covers all covering pairs of the lattice,
  // which implies monotonicity along any chain.
  for (SubsetId s = 0; s < n; ++s) {
    for (int i = 0; i < g; ++i) {
      if (subset_contains(s, i)) continue;
      if (values[s] > values[s | (SubsetId{1} << i)] + tol) return false;
    }
  }
  return true;
}

Capacity Capacity::additive(const std::vector<double>& w) {
  const int g = static_cast<int>(w.size());
  check_g(g);
  Capacity mu;
  mu.g = g;
  mu.values.assign(std::size_t{1} << g, 0.0);
  for (SubsetId s = 0; s < mu.values.size(); ++s) {
    double v = 0.0;
    for (int i = 0; i < g; ++i) {
      if (subset_contains(s, i)) v += w[i];
    }
    mu.values[s] = v;
  }
  return mu;
}

Capacity Capacity::uniform_additive(int g) {
  check_g(g);
  std::vector<double> w(g, 1.0 / g);
  // Pin the total to exactly 1 so the equality constraint holds bitwise.
  double partial = 0.0;
  for (int i = 0; i + 1 < g; ++i) partial += w[i];
  w[g - 1] = 1.0 - partial;
  return additive(w);
}

Capacity Capacity::from_labels(int g, const std::map<std::string, double>& mu_by_label) {
  check_g(g);
  Capacity mu;
  mu.g = g;
  mu.values.assign(std::size_t{1} << g, 0.0);
  for (const auto& [label, v] : mu_by_label) {
    mu.values[subset_from_label(label, g)] = v;
  }
  return mu;
}

MobiusVector MobiusVector::zeros(int g) {
  check_g(g);
  MobiusVector m;
  m.g = g;
  m.values.assign(std::size_t{1} << g, 0.0);
  return m;
}

MobiusVector MobiusVector::from_labels(int g, const std::map<std::string, double>& by_label) {
  MobiusVector m = zeros(g);
  for (const auto& [label, v] : by_label) {
    m.values[subset_from_label(label, g)] = v;
  }
  return m;
}

Capacity mobius_to_capacity(const MobiusVector& m) {
  check_lattice(m.g, m.values.size());
  Capacity mu;
  mu.g = m.g;
  mu.values = m.values;
  // Subset-sum (zeta) transform, one bit at a time.
  const SubsetId n = SubsetId{1} << m.g;
  for (int i = 0; i < m.g; ++i) {
    const SubsetId bit = SubsetId{1} << i;
    for (SubsetId s = 0; s < n; ++s) {
      if (s & bit) mu.values[s] += mu.values[s ^ bit];
    }
  }
  return mu;
}

MobiusVector capacity_to_mobius(const Capacity& mu) {
  check_lattice(mu.g, mu.values.size());
  MobiusVector m;
  m.g = mu.g;
  m.values = mu.values;
  const SubsetId n = SubsetId{1} << mu.g;
  for (int i = 0; i < mu.g; ++i) {
    const SubsetId bit = SubsetId{1} << i;
    for (SubsetId s = 0; s < n; ++s) {
      if (s & bit) m.values[s] -= m.values[s ^ bit];
    }
  }
  return m;
}

ConstraintSystem build_constraints(int g) {
  check_g(g);
  ConstraintSystem cs;
  cs.n_vars = (1 << g) - 1;

  cs.equality.coeffs.assign(cs.n_vars, 1.0);
  cs.equality.rhs = 1.0;

  const SubsetId full = (SubsetId{1} << g) - 1;
  cs.inequalities.reserve(static_cast<std::size_t>(g) << (g - 1));
  for (int k = 0; k < g; ++k) {
    const SubsetId bit = SubsetId{1} << k;
    const SubsetId rest = full ^ bit;
    for_each_subset_of(rest, [&](SubsetId h) {
      LinearRowSpec row;
      row.coeffs.assign(cs.n_vars, 0.0);
      row.rhs = 0.0;
      row.attribute = k;
      row.conditioning_set = h;
      for_each_subset_of(h, [&](SubsetId sub) {
        row.coeffs[(sub | bit) - 1] = 1.0;
      });
      cs.inequalities.push_back(std::move(row));
    });
  }
  return cs;
}

bool satisfies_constraints(const MobiusVector& m, const ConstraintSystem& cs, double tol) {
  check_lattice(m.g, m.values.size());
  if (static_cast<std::size_t>(cs.n_vars) + 1 != m.values.size()) {
    throw std::invalid_argument("constraint system / mobius size mismatch");
  }
  auto dot = [&](const LinearRowSpec& row) {
    double v = 0.0;
    for (int j = 0; j < cs.n_vars; ++j) v += row.coeffs[j] * m.values[j + 1];
    return v;
  };
  if (std::abs(dot(cs.equality) - cs.equality.rhs) > tol) return false;
  for (const auto& row : cs.inequalities) {
    if (dot(row) < -tol) return false;
  }
  return true;
}

std::vector<double> shapley(const Capacity& mu) {
  check_lattice(mu.g, mu.values.size());
  const int g = mu.g;
  const SubsetId full = mu.full_set();
  std::vector<double> s(g, 0.0);
  for (int k = 0; k < g; ++k) {
    const SubsetId bit = SubsetId{1} << k;
    double acc = 0.0;
    for_each_subset_of(full ^ bit, [&](SubsetId a) {
      const double c = coalition_coeff(g, subset_cardinality(a), 1);
      acc += c * (mu.at(a | bit) - mu.at(a));
    });
    s[k] = acc;
  }
  return s;
}

double interaction_pair(const Capacity& mu, int q, int w) {
  check_lattice(mu.g, mu.values.size());
  if (q == w) throw std::invalid_argument("interaction_pair: attributes must differ");
  if (q < 0 || q >= mu.g || w < 0 || w >= mu.g) {
    throw std::invalid_argument("interaction_pair: attribute index out of range");
  }
  const SubsetId bq = SubsetId{1} << q;
  const SubsetId bw = SubsetId{1} << w;
  double acc = 0.0;
  for_each_subset_of(mu.full_set() ^ bq ^ bw, [&](SubsetId a) {
    const double c = coalition_coeff(mu.g, subset_cardinality(a), 2);
    acc += c * (mu.at(a | bq | bw) - mu.at(a | bq) - mu.at(a | bw) + mu.at(a));
  });
  return acc;
}

double interaction_group(const Capacity& mu, SubsetId b) {
  check_lattice(mu.g, mu.values.size());
  if (b == 0) throw std::invalid_argument("interaction_group: empty coalition");
  if (b > mu.full_set()) throw std::invalid_argument("interaction_group: coalition out of range");
  const int cb = subset_cardinality(b);
  double acc = 0.0;
  for_each_subset_of(mu.full_set() ^ b, [&](SubsetId a) {
    const double c = coalition_coeff(mu.g, subset_cardinality(a), cb);
    double inner = 0.0;
    for_each_subset_of(b, [&](SubsetId csub) {
      const int sign = ((cb - subset_cardinality(csub)) % 2 == 0) ? 1 : -1;
      inner += sign * mu.at(a | csub);
    });
    acc += c * inner;
  });
  return acc;
}

namespace {
nlohmann::ordered_json lattice_to_json(int g, const std::vector<double>& values) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  // Order by cardinality, then by mask, matching the usual presentation.
  for (int card = 0; card <= g; ++card) {
    for (SubsetId s = 0; s < values.size(); ++s) {
      if (subset_cardinality(s) == card) j[subset_label(s)] = values[s];
    }
  }
  return j;
}

std::vector<double> lattice_from_json(const nlohmann::json& j, int g) {
  std::vector<double> values(std::size_t{1} << g, 0.0);
  for (const auto& [label, v] : j.items()) {
    values[subset_from_label(label, g)] = v.get<double>();
  }
  return values;
}
}  // namespace

nlohmann::ordered_json capacity_to_json(const Capacity& mu) {
  return lattice_to_json(mu.g, mu.values);
}

Capacity capacity_from_json(const nlohmann::json& j, int g) {
  check_g(g);
  Capacity mu;
  mu.g = g;
  mu.values = lattice_from_json(j, g);
  return mu;
}

nlohmann::ordered_json mobius_to_json(const MobiusVector& m) {
  return lattice_to_json(m.g, m.values);
}

MobiusVector mobius_from_json(const nlohmann::json& j, int g) {
  check_g(g);
  MobiusVector m;
  m.g = g;
  m.values = lattice_from_json(j, g);
  return m;
}

}  // namespace chopro
