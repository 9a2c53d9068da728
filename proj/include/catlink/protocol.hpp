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


#ifndef CATLINK_PROTOCOL_HPP
#define CATLINK_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catlink/fock.hpp"
#include "catlink/measurement.hpp"
#include "catlink/optics.hpp"
#include "catlink/tomography.hpp"

namespace catlink {

/// c0|0> + c1|1>.
struct DVQubit {
  Complex c0 = 1.0;
  Complex c1 = 0.0;

  /// Normalizes and fixes the global phase (c0 real >= 0, else c1 real > 0).
  static DVQubit from_amplitudes(Complex c0, Complex c1);
  /// Dominant eigenvector of a 2x2 block, phase-fixed.
  static DVQubit dominant(const ComplexMatrix& block);
  ComplexMatrix density() const;
};

void validate(const DVQubit& qubit);

enum class BsmHerald {
  tap_homodyne,     ///< tap on the herald port: click on the tap arm, window on the through arm
  ideal_projector,  ///< herald port exactly |1>, no tap or homodyne
};

struct LossSites {
  LossChannelSpec input;   ///< DV qubit before the BSM
  LossChannelSpec dv_arm;  ///< DV arm of the hybrid resource before the BSM
  LossChannelSpec output;  ///< cat mode after the BSM
};

enum class ResourceKind { generated, analytic };

struct ProtocolConfig {
  SqueezerSpec r1{0.12, 0.0};
  SqueezerSpec r2{0.07, 0.0};
  SqueezerSpec r_s{0.30, std::numbers::pi};
  DisplacementSpec beta{};
  BeamSplitterSpec tap_smss{0.95, 0.0};
  BeamSplitterSpec tap_bsm{0.95, 0.0};
  BeamSplitterSpec bsm_bs{0.5, 0.0};
  ClickDetectorSpec spm1{};
  ClickDetectorSpec spm2{};
  ClickDetectorSpec spm3{};
  HomodyneWindowSpec homodyne{};
  LossSites loss{};
  std::optional<Complex> alpha_target{};  ///< empty: matched by grid search
  int cutoff = 12;
  double tail_tolerance = kDefaultTailTolerance;
  BsmHerald bsm_herald = BsmHerald::tap_homodyne;
  bool condition_other_port = true;
  ResourceKind resource = ResourceKind::generated;
};

void validate(const ProtocolConfig& config);

/// Qubit compression onto {|C+>, |C->}.
struct CatQubitState {
  ComplexMatrix qubit_block;
  double leakage = 0.0;
};

struct StageProbability {
  std::string label;
  double probability = 0.0;
};

// ------------------------------------------------------------ stage 1

struct DVPreparation {
  HeraldOutcome herald;  ///< heralded single-mode state
  DVQubit qubit;
  ComplexMatrix block;  ///< 2x2 restriction to {|0>, |1>}, renormalized
  double leakage = 0.0;
};

/// TMSS1 on (0, 1), D(beta) on mode 0, SPM1 click on mode 0; keeps mode 1.
DVPreparation prepare_dv_qubit(const SqueezerSpec& r1, const DisplacementSpec& beta, const ClickDetectorSpec& spm1,
                               int cutoff, double tail_tolerance = kDefaultTailTolerance);
/// The displaced TMSS1 before the herald.
DensityOp displaced_tmss(const SqueezerSpec& r1, const DisplacementSpec& beta, int cutoff,
                         double tail_tolerance = kDefaultTailTolerance);

struct SuiteInput {
  DisplacementSpec beta;
  DVPreparation preparation;
};

/// beta in {0, l, -l, i l, -i l, 1} with l = tanh r1.
std::vector<DisplacementSpec> suite_displacements(const SqueezerSpec& r1);
std::vector<SuiteInput> six_qubit_suite(const SqueezerSpec& r1, const ClickDetectorSpec& spm1, int cutoff,
                                        double tail_tolerance = kDefaultTailTolerance);

// ------------------------------------------------------------ stage 2

/// SMSS on mode 0 tapped into vacuum mode 1, click on the tap. Single-mode result.
HeraldOutcome photon_subtracted_smss(const SqueezerSpec& r_s, const BeamSplitterSpec& tap, const ClickDetectorSpec& spm,
                                     int cutoff, double tail_tolerance = kDefaultTailTolerance);

/// TMSS2 on (a=0, b=1), SMSS on c=2, vacuum d=3, after the tap BS(c, d) and
/// the balanced BS(b, d).
FockVector hybrid_source_state(const SqueezerSpec& r2, const SqueezerSpec& r_s, const BeamSplitterSpec& tap_smss,
                               int cutoff, double tail_tolerance = kDefaultTailTolerance);
/// Click on d of hybrid_source_state, b traced. Result modes: (a, c).
HeraldOutcome generate_hybrid_entanglement(const SqueezerSpec& r2, const SqueezerSpec& r_s,
                                           const BeamSplitterSpec& tap_smss, const ClickDetectorSpec& spm2, int cutoff,
                                           double tail_tolerance = kDefaultTailTolerance);

/// Normalized |0>|C-> + |1>|C+>.
FockVector hybrid_target(Complex alpha, int cutoff, double tail_tolerance = kDefaultTailTolerance);
DensityOp analytic_hybrid_resource(Complex alpha, int cutoff, double tail_tolerance = kDefaultTailTolerance);

struct AlphaMatch {
  double alpha = 0.0;
  double fidelity = 0.0;
};

/// Real alpha in {0.01, 0.02, ..., 2.00} maximizing the fidelity of a
/// single-mode state to the cat of given parity. Points whose cat exceeds
/// the tail tolerance are skipped.
AlphaMatch match_cat_alpha(const DensityOp& rho, Parity parity, double tail_tolerance = kDefaultTailTolerance);
/// Same grid against hybrid_target for a two-mode (DV, cat) state.
AlphaMatch match_hybrid_alpha(const DensityOp& rho, double tail_tolerance = kDefaultTailTolerance);

// ------------------------------------------------------------ stage 3

struct BsmSettings {
  BeamSplitterSpec mixer{0.5, 0.0};
  BeamSplitterSpec tap{0.95, 0.0};
  ClickDetectorSpec spm3{};
  HomodyneWindowSpec homodyne{};
  BsmHerald herald = BsmHerald::tap_homodyne;
  bool condition_other_port = true;
};

BsmSettings bsm_settings(const ProtocolConfig& config);

/// Herald element on the (input, DV arm) pair: V^dag E V where V is the mixer
/// (and tap) and E the product of detector elements. Mixer output 0 is the
/// other port, output 1 the herald port.
ComplexMatrix bsm_effective_element(const BsmSettings& settings, int cutoff);

/// Conditions modes (input_mode, dv_mode) of a joint state.
HeraldOutcome bell_state_measurement(const DensityOp& joint, int input_mode, int dv_mode,
                                     const BsmSettings& settings);
/// Product input: single-mode input state and a two-mode (DV, cat) resource.
HeraldOutcome bell_state_measurement(const DensityOp& input, const DensityOp& resource, const ComplexMatrix& element);
HeraldOutcome bell_state_measurement(const DensityOp& input, const DensityOp& resource, const BsmSettings& settings);

// ------------------------------------------------------------ analysis

CatQubitState extract_cat_qubit(const DensityOp& rho, Complex alpha, double tail_tolerance = kDefaultTailTolerance);
CatQubitState extract_cat_qubit(const DensityOp& rho, const CatBasis& basis);

/// c0|0> + c1|1> maps to c0|C+> + c1|C->: the single identified Bell event
/// composed with the resource pairing acts as a logical X, absorbed here.
CatQubitState teleport_convention(const DVQubit& input);
FockVector teleport_target(const DVQubit& input, const CatBasis& basis);

/// <t|block|t> with t the convention image of `input`; leakage counts as error.
double state_fidelity(const CatQubitState& output, const DVQubit& input);

/// Level-N population per mode above `tolerance`, as messages.
std::vector<std::string> truncation_warnings(const DensityOp& rho, const std::string& label, double tolerance);
std::vector<std::string> truncation_warnings(const FockVector& psi, const std::string& label, double tolerance);

struct RunReport {
  double success_probability = 0.0;
  std::vector<StageProbability> stage_probabilities;
  CatQubitState output;
  double state_fidelity = 0.0;
  DVQubit input;
  ComplexMatrix input_block;
  double input_leakage = 0.0;
  Complex beta = 0.0;
  Complex alpha = 0.0;
  double hybrid_fidelity = 0.0;
  std::vector<std::string> truncation_warnings;
};

/// Runs the pipeline for many inputs with the config-level pieces (hybrid
/// resource, matched alpha, herald element) built once.
class Converter {
 public:
  explicit Converter(ProtocolConfig config);

  const ProtocolConfig& config() const noexcept { return config_; }
  Complex alpha() const noexcept { return alpha_; }
  const CatBasis& cat_basis() const noexcept { return cat_basis_; }
  /// Normalized resource after any DV-arm loss.
  const DensityOp& resource() const noexcept { return resource_; }
  double resource_probability() const noexcept { return resource_probability_; }
  /// Fidelity of the resource (before DV-arm loss) to hybrid_target(alpha).
  double hybrid_fidelity() const noexcept { return hybrid_fidelity_; }
  const ComplexMatrix& bsm_element() const noexcept { return bsm_element_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  RunReport run(const DisplacementSpec& beta) const;
  /// Stage-1 state of an input after input loss.
  DensityOp input_state(const DVPreparation& prep) const;
  RunReport run(const DisplacementSpec& beta, const DVPreparation& prep) const;

 private:
  struct Parts;
  static Parts build(ProtocolConfig config);
  explicit Converter(Parts&& parts);

  ProtocolConfig config_;
  Complex alpha_;
  CatBasis cat_basis_;
  DensityOp resource_;
  double resource_probability_ = 1.0;
  double hybrid_fidelity_ = 0.0;
  ComplexMatrix bsm_element_;
  std::vector<std::string> warnings_;
};

RunReport run_converter(const ProtocolConfig& config, const DisplacementSpec& input_beta);

struct SuiteReport {
  std::vector<RunReport> runs;
  ProcessMap process;
  ThresholdReport thresholds;
  Complex alpha = 0.0;
  double hybrid_fidelity = 0.0;
};

/// Six-qubit suite through one Converter, then tomography and thresholds.
/// Tomography inputs are the renormalized heralded input blocks.
SuiteReport run_suite(const ProtocolConfig& config);
SuiteReport run_suite(const Converter& converter);

// ------------------------------------------------------------ Monte Carlo

struct HeraldCheck {
  std::string stage;
  double exact = 0.0;
  std::size_t samples = 0;
  std::size_t hits = 0;

  double frequency() const { return samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples); }
  double sigma() const;
  /// |frequency - exact| <= k sigma.
  bool agrees(double k) const;
};

/// Samples each herald stage of a run from its exact outcome distribution.
/// Sampled records are appended to `records` when given.
std::vector<HeraldCheck> monte_carlo_herald_check(const ProtocolConfig& config, const DisplacementSpec& beta,
                                                  std::size_t samples, std::uint64_t seed,
                                                  std::vector<OutcomeRecord>* records = nullptr);

}  // namespace catlink

#endif  // CATLINK_PROTOCOL_HPP
