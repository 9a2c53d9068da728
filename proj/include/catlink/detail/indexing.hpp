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

#ifndef CATLINK_DETAIL_INDEXING_HPP
#define CATLINK_DETAIL_INDEXING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "catlink/fock.hpp"

namespace catlink::detail {

/// Splits a basis into an ordered group of modes and the remaining modes
/// (ascending). Every flat index maps to a (group, rest) index pair, with
/// the first listed group mode the slowest digit of the group index.
class ModePartition {
 public:
  ModePartition(const FockBasis& basis, std::span<const int> group);

  std::size_t group_dimension() const noexcept { return group_dim_; }
  std::size_t rest_dimension() const noexcept { return rest_dim_; }
  const std::vector<int>& rest_modes() const noexcept { return rest_modes_; }

  /// Flat index of the basis state with the given group and rest indices.
  std::size_t flat(std::size_t group_index, std::size_t rest_index) const {
    return table_[group_index * rest_dim_ + rest_index];
  }

 private:
  std::size_t group_dim_ = 1;
  std::size_t rest_dim_ = 1;
  std::vector<int> rest_modes_;
  std::vector<std::size_t> table_;
};

/// Validates a mode list: nonempty, in range, no duplicates.
void check_modes(const FockBasis& basis, std::span<const int> modes);

/// In-place op * x on the given mode for a flat amplitude array.
void apply_single_mode(const FockBasis& basis, int mode, const ComplexMatrix& op,
                       std::span<Complex> data);

/// Applies `f(span)` to every column of `m`, then to every column of the
/// adjoint, returning op * m * op^dagger for the linear map implemented by f.
template <class ColumnOp>
ComplexMatrix conjugate_columns(const ComplexMatrix& m, ColumnOp&& f) {
  ComplexMatrix work = m;
  for (Eigen::Index c = 0; c < work.cols(); ++c) {
    f(std::span<Complex>(work.col(c).data(), static_cast<std::size_t>(work.rows())));
  }
  ComplexMatrix adj = work.adjoint();
  for (Eigen::Index c = 0; c < adj.cols(); ++c) {
    f(std::span<Complex>(adj.col(c).data(), static_cast<std::size_t>(adj.rows())));
  }
  ComplexMatrix out = adj.adjoint();
  return (out + out.adjoint()) * 0.5;
}

}  // namespace catlink::detail

#endif  // CATLINK_DETAIL_INDEXING_HPP
