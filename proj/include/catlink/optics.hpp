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

#ifndef CATLINK_OPTICS_HPP
#define CATLINK_OPTICS_HPP

#include <numbers>
#include <vector>

#include "catlink/fock.hpp"

namespace catlink {

/// Default acceptable probability mass beyond the cutoff for source states.
inline constexpr double kDefaultTailTolerance = 1e-6;

struct SqueezerSpec {
  double r = 0.0;      ///< squeezing parameter, dimensionless, >= 0
  double phase = 0.0;  ///< radians
};

struct DisplacementSpec {
  Complex beta = 0.0;
  double max_magnitude = 2.0;
};

/// Intensity transmissivity T between the two ports it mixes. The first
/// mode's creation operator maps to sqrt(T) a1' + e^{i phase} sqrt(1-T) a2',
/// the second to -e^{-i phase} sqrt(1-T) a1' + sqrt(T) a2'. The inverse of
/// (T, phase) is (T, phase + pi).
struct BeamSplitterSpec {
  double transmissivity = 0.5;
  double phase = 0.0;
};

struct LossChannelSpec {
  double eta = 1.0;  ///< intensity transmission
};

enum class Parity { even, odd };

void validate(const SqueezerSpec& spec);
void validate(const DisplacementSpec& spec);
void validate(const BeamSplitterSpec& spec);
void validate(const LossChannelSpec& spec);

// ------------------------------------------------------------ source states

/// Coherent state e^{-|a|^2/2} sum a^n/sqrt(n!) |n>, renormalized on the
/// truncated basis. Throws TruncationError when the discarded tail exceeds
/// `tail_tolerance`.
FockVector coherent_state(Complex alpha, int cutoff, double tail_tolerance = kDefaultTailTolerance);
/// Probability mass of |alpha> above the cutoff.
double coherent_tail(Complex alpha, int cutoff);

/// Normalized |alpha> + |-alpha> (even) or |alpha> - |-alpha> (odd). Only
/// levels of matching parity are populated. alpha = 0 with even parity is
/// the vacuum; with odd parity it throws.
FockVector cat_state(Complex alpha, Parity parity, int cutoff,
                     double tail_tolerance = kDefaultTailTolerance);

/// Orthonormal pair {|C+>, |C->} for a given amplitude.
class CatBasis {
 public:
  CatBasis(Complex alpha, int cutoff, double tail_tolerance = kDefaultTailTolerance);

  Complex alpha() const noexcept { return alpha_; }
  int cutoff() const noexcept { return plus_.cutoff(); }
  const FockVector& plus() const noexcept { return plus_; }
  const FockVector& minus() const noexcept { return minus_; }
  /// Columns |C+>, |C->.
  const ComplexMatrix& isometry() const noexcept { return isometry_; }

 private:
  Complex alpha_;
  FockVector plus_;
  FockVector minus_;
  ComplexMatrix isometry_;
};

/// Single-mode squeezed vacuum with
///   c_{2n} = (cosh r)^{-1/2} (-e^{i phase} tanh r)^n sqrt((2n)!) / (2^n n!),
/// odd levels zero.
FockVector squeezed_vacuum(const SqueezerSpec& spec, int cutoff,
                           double tail_tolerance = kDefaultTailTolerance);

/// Two-mode squeezed vacuum sum_n (cosh r)^{-1} (e^{i phase} tanh r)^n |n,n>.
FockVector two_mode_squeezed_vacuum(const SqueezerSpec& spec, int cutoff,
                                    double tail_tolerance = kDefaultTailTolerance);

// ------------------------------------------------------------ circuit ops

/// exp(beta a^dag - beta* a) of the truncated generator.
ComplexMatrix displacement_operator(Complex beta, int cutoff);
FockVector apply_displacement(const FockVector& state, int mode, const DisplacementSpec& spec);
DensityOp apply_displacement(const DensityOp& state, int mode, const DisplacementSpec& spec);

/// Diagonal phase e^{i phi n}.
FockVector apply_phase_shift(const FockVector& state, int mode, double phi);
DensityOp apply_phase_shift(const DensityOp& state, int mode, double phi);

/// Per-photon-number blocks of the two-mode unitary. block(n) maps the
/// amplitudes of |k, n-k> (index k = photons in the first mode) to |m, n-m>.
class BeamSplitterBlocks {
 public:
  BeamSplitterBlocks(const BeamSplitterSpec& spec, int cutoff);

  int cutoff() const noexcept { return cutoff_; }
  const ComplexMatrix& block(int total) const { return blocks_.at(static_cast<std::size_t>(total)); }

  /// Applies the beam splitter to modes (i, j) of a flat amplitude array.
  void apply(const FockBasis& basis, int i, int j, std::span<Complex> data) const;

 private:
  int cutoff_;
  std::vector<ComplexMatrix> blocks_;
};

FockVector apply_beam_splitter(const FockVector& state, int i, int j, const BeamSplitterSpec& spec);
DensityOp apply_beam_splitter(const DensityOp& state, int i, int j, const BeamSplitterSpec& spec);

/// Kraus operators K_k = sum_n sqrt(C(n,k)) eta^{(n-k)/2} (1-eta)^{k/2} |n-k><n|.
std::vector<ComplexMatrix> loss_kraus(const LossChannelSpec& spec, int cutoff);
DensityOp apply_loss(const DensityOp& rho, int mode, const LossChannelSpec& spec);

/// sum_k K_k rho K_k^dagger on one mode.
DensityOp apply_kraus(const DensityOp& rho, int mode, const std::vector<ComplexMatrix>& kraus);
/// op rho op^dagger on one mode.
DensityOp apply_single_mode(const DensityOp& rho, int mode, const ComplexMatrix& op);
FockVector apply_single_mode(const FockVector& psi, int mode, const ComplexMatrix& op);

}  // namespace catlink

#endif  // CATLINK_OPTICS_HPP
