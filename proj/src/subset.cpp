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

#include "chopro/subset.hpp"

#include <charconv>
#include <stdexcept>

namespace chopro {

std::string subset_label(SubsetId s) {
  std::string out;
  for (int i = 0; i < kMaxAttributes; ++i) {
    if (!subset_contains(s, i)) continue;
    if (!out.empty()) out += ',';
    out += std::to_string(i + 1);
  }
  return out;
}

SubsetId subset_from_label(std::string_view label, int n_attributes) {
  SubsetId s = 0;
  std::size_t pos = 0;
  while (pos < label.size()) {
    std::size_t end = label.find(',', pos);
    if (end == std::string_view::npos) end = label.size();
    int idx = 0;
    auto [ptr, ec] = std::from_chars(label.data() + pos, label.data() + end, idx);
    if (ec != std::errc{} || ptr != label.data() + end || idx < 1 || idx > n_attributes) {
      throw std::invalid_argument("bad subset label: '" + std::string(label) + "'");
    }
    SubsetId bit = SubsetId{1} << (idx - 1);
    if (s & bit) {
      throw std::invalid_argument("duplicate attribute in subset label: '" + std::string(label) + "'");
    }
    s |= bit;
    pos = end + (end < label.size() ? 1 : 0);
  }
  return s;
}

}  // namespace chopro
