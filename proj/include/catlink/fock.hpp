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

#ifndef CATLINK_FOCK_HPP
#define CATLINK_FOCK_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace catlink {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kNormalizedTolerance = 1e-12;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-10;
inline constexpr double kNullStateThreshold = 1e-14;

/// Truncated multimode Fock space: every mode holds levels 0..cutoff.
///
/// Flat basis indices enumerate occupation tuples in row-major order with
/// mode 0 the slowest-varying digit, i.e. for levels L = cutoff + 1
///
///     index = sum_k n_k * L^(num_modes - 1 - k).
class FockBasis {
 public:
  FockBasis(int num_modes, int cutoff);

  int num_modes() const noexcept { return num_modes_; }
  int cutoff() const noexcept { return cutoff_; }
  int levels() const noexcept { return cutoff_ + 1; }
  std::size_t dimension() const noexcept { return dimension_; }

  /// Distance in flat index between neighbouring levels of `mode`.
  std::size_t stride(int mode) const;

  std::size_t index_of(std::span<const int> occupation) const;
  std::size_t index_of(std::initializer_list<int> occupation) const {
    return index_of(std::span<const int>(occupation.begin(), occupation.size()));
  }
  std::vector<int> occupation_of(std::size_t index) const;
  int occupation(std::size_t index, int mode) const;

  friend bool operator==(const FockBasis&, const FockBasis&) = default;

 private:
  int num_modes_;
  int cutoff_;
  std::size_t dimension_;
};

/// Pure state: complex amplitudes over a FockBasis. Squared norm lies in
/// (0, 1]; sub-normalized vectors represent unnormalized heralded branches.
class FockVector {
 public:
  FockVector(FockBasis basis, ComplexVector amplitudes);

  static FockVector vacuum(int num_modes, int cutoff);
  static FockVector number_state(int cutoff, std::initializer_list<int> occupation);
  static FockVector number_state(int cutoff, std::span<const int> occupation);

  const FockBasis& basis() const noexcept { return basis_; }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  int num_modes() const noexcept { return basis_.num_modes(); }
  int cutoff() const noexcept { return basis_.cutoff(); }

  Complex amplitude(std::initializer_list<int> occupation) const;
  double squared_norm() const { return amplitudes_.squaredNorm(); }
  bool is_normalized() const;

 private:
  FockBasis basis_;
  ComplexVector amplitudes_;
};

/// Mixed state. Construction checks shape, Hermiticity (elementwise,
/// kHermiticityTolerance) and trace in (0, 1]. Positivity is only checked by
/// operations that need a spectrum; see validate_positive().
class DensityOp {
 public:
  DensityOp(FockBasis basis, ComplexMatrix matrix);

  static DensityOp pure(const FockVector& state);

  const FockBasis& basis() const noexcept { return basis_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  int num_modes() const noexcept { return basis_.num_modes(); }
  int cutoff() const noexcept { return basis_.cutoff(); }

  double trace() const { return matrix_.trace().real(); }
  Complex element(std::initializer_list<int> row, std::initializer_list<int> col) const;

 private:
  FockBasis basis_;
  ComplexMatrix matrix_;
};

template <class State>
struct Normalized {
  State state;
  /// Squared norm (vectors) or trace (densities) before normalization.
  double weight;
};

FockVector tensor(const FockVector& a, const FockVector& b);
DensityOp tensor(const DensityOp& a, const DensityOp& b);

/// Reduced state on `keep`; kept modes retain their relative order.
DensityOp partial_trace(const DensityOp& rho, std::span<const int> keep);
DensityOp partial_trace(const DensityOp& rho, std::initializer_list<int> keep);
/// Same as partial_trace(DensityOp::pure(psi), keep) without the outer product.
DensityOp reduced_density(const FockVector& psi, std::span<const int> keep);
DensityOp reduced_density(const FockVector& psi, std::initializer_list<int> keep);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, evaluated as the
/// squared trace norm of sqrt(rho) sqrt(sigma).
double fidelity(const DensityOp& rho, const DensityOp& sigma);
/// <psi|rho|psi> for normalized psi.
double fidelity(const DensityOp& rho, const FockVector& psi);
double fidelity(const FockVector& psi, const FockVector& phi);

Normalized<FockVector> normalize(const FockVector& state);
Normalized<DensityOp> normalize(const DensityOp& state);

/// Throws InvalidStateError if an eigenvalue is below -kPositivityTolerance.
void validate_positive(const DensityOp& rho);
/// Clips eigenvalues in [-kPositivityTolerance, 0) to zero and rescales to
/// the original trace; more negative eigenvalues throw InvalidStateError.
DensityOp enforce_positivity(const DensityOp& rho);

/// Photon-number distribution of one mode (diagonal of its reduced state).
std::vector<double> photon_distribution(const DensityOp& rho, int mode);
std::vector<double> photon_distribution(const FockVector& psi, int mode);
double mean_photon_number(const DensityOp& rho, int mode);
double mean_photon_number(const FockVector& psi, int mode);

/// Debug dump: {"cutoff": N, "modes": m, "amplitudes": [[re, im], ...]} in
/// flat index order.
std::string to_debug_json(const FockVector& state);

}  // namespace catlink

#endif  // CATLINK_FOCK_HPP
