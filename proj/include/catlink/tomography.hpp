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


#ifndef CATLINK_TOMOGRAPHY_HPP
#define CATLINK_TOMOGRAPHY_HPP

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "catlink/fock.hpp"

namespace catlink {

/// Pauli basis order {I, X, Y, Z}.
const std::array<Eigen::Matrix2cd, 4>& pauli_basis();

/// (2 Re rho01, -2 Im rho01, rho00 - rho11).
Eigen::Vector3d bloch_vector(const Eigen::Matrix2cd& rho);
Eigen::Matrix2cd density_from_bloch(const Eigen::Vector3d& s);

/// Channel as rho -> sum_mn chi_mn P_m rho P_n^dag and as the affine Bloch
/// map s -> M s + t.
struct ProcessMap {
  Eigen::Matrix3d bloch_matrix = Eigen::Matrix3d::Identity();
  Eigen::Vector3d bloch_offset = Eigen::Vector3d::Zero();
  Eigen::Matrix4cd chi;
  /// Overlap with the identity channel, Re chi_00.
  double process_fidelity = 0.0;
  /// Trace of each output block before renormalization.
  std::vector<double> renormalization;
};

struct TomographyPair {
  Eigen::Matrix2cd input;
  /// Qubit block, possibly with trace below one.
  Eigen::Matrix2cd output;
};

/// Least-squares affine Bloch fit, converted to chi and projected onto the
/// positive trace-one cone; (M, t) are recomputed from the projected chi.
/// Throws std::invalid_argument "inputs do not span the Bloch sphere" for
/// rank-deficient inputs.
ProcessMap process_tomography(std::span<const TomographyPair> pairs);

Eigen::Matrix4cd chi_from_bloch(const Eigen::Matrix3d& m, const Eigen::Vector3d& t);
void bloch_from_chi(const Eigen::Matrix4cd& chi, Eigen::Matrix3d& m, Eigen::Vector3d& t);
/// Nearest positive trace-one matrix in Frobenius norm.
Eigen::Matrix4cd project_to_channel(const Eigen::Matrix4cd& chi);
Eigen::Matrix2cd apply_chi(const Eigen::Matrix4cd& chi, const Eigen::Matrix2cd& rho);
ProcessMap process_map_from_chi(const Eigen::Matrix4cd& chi);

/// Average over pure inputs of <psi|E(psi)|psi>, integrated on the sphere
/// with Gauss-Legendre in cos(theta) and a uniform rule in phi.
double average_fidelity(const Eigen::Matrix4cd& chi);

inline constexpr double kClassicalAverageFidelity = 2.0 / 3.0;
inline constexpr double kClassicalProcessFidelity = 0.5;
/// State-dependent bound quoted for the experiment's input states; reference only.
inline constexpr double kReferenceStateBound = 0.74;

struct ThresholdReport {
  double average_fidelity_bound = kClassicalAverageFidelity;
  double process_fidelity_bound = kClassicalProcessFidelity;
  double reference_state_bound = kReferenceStateBound;
  double average_state_fidelity = 0.0;  ///< mean of the measured per-input fidelities
  double average_fidelity = 0.0;        ///< of the fitted channel
  double process_fidelity = 0.0;
  bool average_pass = false;
  bool process_pass = false;

  bool pass() const { return average_pass && process_pass; }
};

/// The average-fidelity check uses the measured per-input fidelities; the
/// process check uses F_pro of the fitted channel.
ThresholdReport classical_thresholds(std::span<const double> state_fidelities, const ProcessMap& process);

}  // namespace catlink

#endif  // CATLINK_TOMOGRAPHY_HPP
