// Copyright 2026 The catlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catlink/detail/indexing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace catlink::detail {

void check_modes(const FockBasis& basis, std::span<const int> modes) {
  if (modes.empty()) {
    throw std::invalid_argument("mode set must be nonempty");
  }
  std::vector<bool> seen(static_cast<std::size_t>(basis.num_modes()), false);
  for (int m : modes) {
    if (m < 0 || m >= basis.num_modes()) {
      throw std::invalid_argument("mode index " + std::to_string(m) + " out of range for " +
                                  std::to_string(basis.num_modes()) + "-mode state");
    }
    if (seen[static_cast<std::size_t>(m)]) {
      throw std::invalid_argument("mode index " + std::to_string(m) + " listed twice");
    }
    seen[static_cast<std::size_t>(m)] = true;
  }
}

ModePartition::ModePartition(const FockBasis& basis, std::span<const int> group) {
  check_modes(basis, group);
  const auto levels = static_cast<std::size_t>(basis.levels());
  std::vector<bool> in_group(static_cast<std::size_t>(basis.num_modes()), false);
  for (int m : group) in_group[static_cast<std::size_t>(m)] = true;
  for (int m = 0; m < basis.num_modes(); ++m) {
    if (!in_group[static_cast<std::size_t>(m)]) rest_modes_.push_back(m);
  }
  for (std::size_t i = 0; i < group.size(); ++i) group_dim_ *= levels;
  for (std::size_t i = 0; i < rest_modes_.size(); ++i) rest_dim_ *= levels;

  table_.resize(basis.dimension());
  std::vector<int> occ;
  for (std::size_t flat_index = 0; flat_index < basis.dimension(); ++flat_index) {
    occ = basis.occupation_of(flat_index);
    std::size_t g = 0;
    for (int m : group) g = g * levels + static_cast<std::size_t>(occ[static_cast<std::size_t>(m)]);
    std::size_t r = 0;
    for (int m : rest_modes_) r = r * levels + static_cast<std::size_t>(occ[static_cast<std::size_t>(m)]);
    table_[g * rest_dim_ + r] = flat_index;
  }
}

void apply_single_mode(const FockBasis& basis, int mode, const ComplexMatrix& op,
                       std::span<Complex> data) {
  const auto levels = static_cast<std::size_t>(basis.levels());
  if (op.rows() != static_cast<Eigen::Index>(levels) || op.cols() != op.rows()) {
    throw std::invalid_argument("single-mode operator has wrong dimension");
  }
  const std::size_t inner = basis.stride(mode);
  const std::size_t block = inner * levels;
  const std::size_t outer = basis.dimension() / block;
  std::vector<Complex> in(levels);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * block + i;
      for (std::size_t n = 0; n < levels; ++n) in[n] = data[base + n * inner];
      for (std::size_t m = 0; m < levels; ++m) {
        Complex acc = 0.0;
        for (std::size_t n = 0; n < levels; ++n) {
          acc += op(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) * in[n];
        }
        data[base + m * inner] = acc;
      }
    }
  }
}

}  // namespace catlink::detail
