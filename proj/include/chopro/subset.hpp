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

#ifndef CHOPRO_SUBSET_HPP
#define CHOPRO_SUBSET_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace chopro {

// A subset of the attribute ground set, encoded as a bitmask.
// Attribute i (0-based) maps to bit i, so 0 <= bits < 2^G.
using SubsetId = std::uint32_t;

// Lattice sizes explode as 2^G; anything past this is refused outright.
inline constexpr int kMaxAttributes = 12;

inline int subset_cardinality(SubsetId s) { return std::popcount(s); }

inline bool subset_contains(SubsetId s, int attribute) {
  return (s >> attribute) & 1u;
}

// Human-readable label: 1-based attribute indices, ascending, comma-joined.
// The empty set maps to "".  Examples: {x1} -> "1", {x1,x3} -> "1,3".
std::string subset_label(SubsetId s);

// Inverse of subset_label.  Throws std::invalid_argument on malformed input
// or attribute indices outside 1..n_attributes.
SubsetId subset_from_label(std::string_view label, int n_attributes);

// Visits every subset of `mask` (including empty set and mask itself).
template <typename F>
void for_each_subset_of(SubsetId mask, F&& fn) {
  SubsetId sub = mask;
  while (true) {
    fn(sub);
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
}

}  // namespace chopro

#endif  // CHOPRO_SUBSET_HPP
