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


#ifndef CATLINK_MEASUREMENT_HPP
#define CATLINK_MEASUREMENT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "catlink/fock.hpp"

namespace catlink {

/// On/off detector. The photodiode of a tapped detector unit is folded into
/// `efficiency`.
struct ClickDetectorSpec {
  double efficiency = 1.0;
  double dark_count_prob = 0.0;
};

/// Accepts when the rotated quadrature x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2)
/// lands in [center - half_width, center + half_width]. Vacuum variance is 1/2.
struct HomodyneWindowSpec {
  double quadrature_angle = 0.0;
  double center = 0.0;
  double half_width = 0.5;
  int grid_points = 1024;
};

void validate(const ClickDetectorSpec& spec);
void validate(const HomodyneWindowSpec& spec);

struct ClickPovm {
  ComplexMatrix click;
  ComplexMatrix no_click;
};

ClickPovm click_povm(const ClickDetectorSpec& spec, int cutoff);
ComplexMatrix photon_number_projector(int n, int cutoff);

/// Normalized Hermite functions psi_0..psi_cutoff at x; rows index n.
Eigen::MatrixXd hermite_functions(std::span<const double> x, int cutoff);
/// Half-range of the quadrature grid for a given cutoff.
double quadrature_grid_half_range(int cutoff);
/// E_mn = e^{i (m - n) theta} * integral over the window of psi_m(x) psi_n(x).
/// Throws std::invalid_argument naming a sufficient grid size when the
/// estimated integration error exceeds 1e-6.
ComplexMatrix homodyne_window_povm(const HomodyneWindowSpec& spec, int cutoff);

struct HeraldOutcome {
  double probability = 0.0;
  DensityOp post_state;  // measured modes removed
  std::string label;
};

/// Destructive measurement of `modes` with an element on their joint space
/// (first listed mode slowest). The remaining modes keep their order.
HeraldOutcome condition(const DensityOp& rho, std::span<const int> modes, const ComplexMatrix& element,
                        std::string label = {});
HeraldOutcome condition(const DensityOp& rho, int mode, const ComplexMatrix& element,
                        std::string label = {});
HeraldOutcome condition(const FockVector& psi, std::span<const int> modes, const ComplexMatrix& element,
                        std::string label = {});
HeraldOutcome condition(const FockVector& psi, int mode, const ComplexMatrix& element,
                        std::string label = {});

/// Tr_modes[(E x I) rho] without normalization. Throws HeraldError when the
/// trace is below the null-state threshold.
DensityOp condition_unnormalized(const DensityOp& rho, std::span<const int> modes, const ComplexMatrix& element);

double herald_probability(const DensityOp& rho, std::span<const int> modes, const ComplexMatrix& element);
double herald_probability(const DensityOp& rho, int mode, const ComplexMatrix& element);

// ------------------------------------------------------------ Monte Carlo

struct DetectorPlan {
  std::string name;
  std::vector<int> modes;
  std::vector<ComplexMatrix> povm;
};

struct MeasurementPlan {
  std::vector<DetectorPlan> detectors;
};

void validate(const MeasurementPlan& plan, const FockBasis& basis);

struct OutcomeRecord {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, int>> outcomes;
  double probability = 0.0;

  friend bool operator==(const OutcomeRecord&, const OutcomeRecord&) = default;
};

/// Draws one outcome per detector in plan order from the exact conditional
/// distribution.
OutcomeRecord sample_trajectory(const DensityOp& rho, const MeasurementPlan& plan, std::uint64_t seed);
/// Trajectory k uses seed splitmix64(seed + k). The outcome tree is built
/// once and shared across trajectories.
std::vector<OutcomeRecord> sample_trajectories(const DensityOp& rho, const MeasurementPlan& plan,
                                               std::uint64_t seed, std::size_t count);

std::uint64_t splitmix64(std::uint64_t x);

/// {"seed": u64, "outcomes": [{"detector": str, "result": int}], "probability": float}
std::string to_json_line(const OutcomeRecord& record);

}  // namespace catlink

#endif  // CATLINK_MEASUREMENT_HPP
