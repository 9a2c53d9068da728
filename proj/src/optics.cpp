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

#include "catlink/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "catlink/detail/indexing.hpp"
#include "catlink/errors.hpp"

namespace catlink {

namespace {

Complex ipow(Complex z, int n) {
  Complex out = 1.0;
  for (int k = 0; k < n; ++k) out *= z;
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// log of the Poisson weight e^{-x} x^n / n!.
double log_poisson(double x, int n) {
  if (x == 0.0) return n == 0 ? 0.0 : -INFINITY;
  return -x + n * std::log(x) - std::lgamma(n + 1.0);
}

// Mass above `cutoff` of a distribution given by `weight(n)` that decays
// monotonically beyond its mode; sums until terms stop mattering.
template <class Weight>
double tail_above(int cutoff, Weight&& weight) {
  double tail = 0.0;
  for (int n = cutoff + 1; n < cutoff + 4000; ++n) {
    const double w = weight(n);
    tail += w;
    if (n > cutoff + 10 && w < 1e-18 * std::max(tail, 1e-300)) break;
  }
  return tail;
}

template <class Tail>
[[noreturn]] void throw_truncation(const std::string& what, int cutoff, double tail, double tolerance,
                                   Tail&& tail_at) {
  int needed = cutoff + 1;
  while (tail_at(needed) > tolerance && needed < cutoff + 4000) ++needed;
  throw TruncationError(what + ": tail " + std::to_string(tail) + " above " + std::to_string(tolerance) +
                            " at cutoff " + std::to_string(cutoff) + "; requires cutoff >= " +
                            std::to_string(needed),
                        needed);
}

double squeezed_tail(double r, int cutoff) {
  const double t2 = std::tanh(r) * std::tanh(r);
  if (t2 == 0.0) return 0.0;
  // |c_{2n}|^2 = t^{2n} (2n)! / (4^n (n!)^2 cosh r)
  return tail_above(cutoff, [&](int level) {
    if (level % 2 != 0) return 0.0;
    const int n = level / 2;
    return std::exp(n * std::log(t2) + std::lgamma(2.0 * n + 1.0) - n * std::log(4.0) -
                    2.0 * std::lgamma(n + 1.0)) /
           std::cosh(r);
  });
}

double tmss_tail(double r, int cutoff) {
  const double t2 = std::tanh(r) * std::tanh(r);
  return std::pow(t2, cutoff + 1);
}

double cat_tail(Complex alpha, Parity parity, int cutoff) {
  const double x = std::norm(alpha);
  const double norm = parity == Parity::even ? 1.0 + std::exp(-2.0 * x) : -std::expm1(-2.0 * x);
  const int want = parity == Parity::even ? 0 : 1;
  return tail_above(cutoff, [&](int n) {
    if (n % 2 != want) return 0.0;
    return 2.0 * std::exp(log_poisson(x, n)) / norm;
  });
}

ComplexVector renormalized(ComplexVector v) {
  const double n = v.norm();
  if (n <= 0.0) throw NullStateError();
  return v / n;
}

}  // namespace

void validate(const SqueezerSpec& spec) {
  if (!(spec.r >= 0.0) || !std::isfinite(spec.r)) throw std::invalid_argument("squeezing r must be >= 0");
  if (!std::isfinite(spec.phase)) throw std::invalid_argument("squeezing phase must be finite");
}

void validate(const DisplacementSpec& spec) {
  if (!std::isfinite(spec.beta.real()) || !std::isfinite(spec.beta.imag())) {
    throw std::invalid_argument("displacement must be finite");
  }
  if (std::abs(spec.beta) > spec.max_magnitude) {
    throw std::invalid_argument("displacement |beta| = " + std::to_string(std::abs(spec.beta)) +
                                " exceeds bound " + std::to_string(spec.max_magnitude));
  }
}

void validate(const BeamSplitterSpec& spec) {
  if (!(spec.transmissivity >= 0.0 && spec.transmissivity <= 1.0)) {
    throw std::invalid_argument("beam splitter transmissivity must lie in [0, 1]");
  }
  if (!std::isfinite(spec.phase)) throw std::invalid_argument("beam splitter phase must be finite");
}

void validate(const LossChannelSpec& spec) {
  if (!(spec.eta >= 0.0 && spec.eta <= 1.0)) throw std::invalid_argument("loss eta must lie in [0, 1]");
}

// ------------------------------------------------------------ source states

double coherent_tail(Complex alpha, int cutoff) {
  const double x = std::norm(alpha);
  return tail_above(cutoff, [&](int n) { return std::exp(log_poisson(x, n)); });
}

FockVector coherent_state(Complex alpha, int cutoff, double tail_tolerance) {
  const double tail = coherent_tail(alpha, cutoff);
  if (tail > tail_tolerance) {
    throw_truncation("coherent state", cutoff, tail, tail_tolerance,
                     [&](int n) { return coherent_tail(alpha, n); });
  }
  FockBasis basis(1, cutoff);
  ComplexVector amps(cutoff + 1);
  const double envelope = std::exp(-0.5 * std::norm(alpha));
  Complex term = envelope;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
    amps(n) = term;
  }
  return {basis, renormalized(std::move(amps))};
}

FockVector cat_state(Complex alpha, Parity parity, int cutoff, double tail_tolerance) {
  if (parity == Parity::odd && alpha == Complex(0.0)) {
    throw std::invalid_argument("odd cat degenerates to null state");
  }
  FockBasis basis(1, cutoff);
  ComplexVector amps = ComplexVector::Zero(cutoff + 1);
  if (alpha == Complex(0.0)) {
    amps(0) = 1.0;
    return {basis, std::move(amps)};
  }
  const double tail = cat_tail(alpha, parity, cutoff);
  if (tail > tail_tolerance) {
    throw_truncation("cat state", cutoff, tail, tail_tolerance,
                     [&](int n) { return cat_tail(alpha, parity, n); });
  }
  // alpha^n / sqrt(n!) on the matching parity; the overall factor is fixed
  // by renormalizing, which also avoids 1 - e^{-2|alpha|^2} cancellation.
  const int want = parity == Parity::even ? 0 : 1;
  Complex term = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
    if (n % 2 == want) amps(n) = term;
  }
  return {basis, renormalized(std::move(amps))};
}

CatBasis::CatBasis(Complex alpha, int cutoff, double tail_tolerance)
    : alpha_(alpha),
      plus_(cat_state(alpha, Parity::even, cutoff, tail_tolerance)),
      minus_(cat_state(alpha, Parity::odd, cutoff, tail_tolerance)) {
  isometry_.resize(cutoff + 1, 2);
  isometry_.col(0) = plus_.amplitudes();
  isometry_.col(1) = minus_.amplitudes();
}

FockVector squeezed_vacuum(const SqueezerSpec& spec, int cutoff, double tail_tolerance) {
  validate(spec);
  const double tail = squeezed_tail(spec.r, cutoff);
  if (tail > tail_tolerance) {
    throw_truncation("squeezed vacuum", cutoff, tail, tail_tolerance,
                     [&](int n) { return squeezed_tail(spec.r, n); });
  }
  FockBasis basis(1, cutoff);
  ComplexVector amps = ComplexVector::Zero(cutoff + 1);
  const Complex ratio = -std::polar(std::tanh(spec.r), spec.phase);
  Complex c = 1.0 / std::sqrt(std::cosh(spec.r));
  amps(0) = c;
  for (int n = 1; 2 * n <= cutoff; ++n) {
    // c_{2n} / c_{2n-2} = ratio * sqrt((2n)(2n-1)) / (2n)
    c *= ratio * std::sqrt((2.0 * n) * (2.0 * n - 1.0)) / (2.0 * n);
    amps(2 * n) = c;
  }
  return {basis, renormalized(std::move(amps))};
}

FockVector two_mode_squeezed_vacuum(const SqueezerSpec& spec, int cutoff, double tail_tolerance) {
  validate(spec);
  const double tail = tmss_tail(spec.r, cutoff);
  if (tail > tail_tolerance) {
    throw_truncation("two-mode squeezed vacuum", cutoff, tail, tail_tolerance,
                     [&](int n) { return tmss_tail(spec.r, n); });
  }
  FockBasis basis(2, cutoff);
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  const Complex ratio = std::polar(std::tanh(spec.r), spec.phase);
  Complex c = 1.0 / std::cosh(spec.r);
  for (int n = 0; n <= cutoff; ++n) {
    amps(static_cast<Eigen::Index>(basis.index_of({n, n}))) = c;
    c *= ratio;
  }
  return {basis, renormalized(std::move(amps))};
}

// ------------------------------------------------------------ circuit ops

ComplexMatrix displacement_operator(Complex beta, int cutoff) {
  const int levels = cutoff + 1;
  ComplexMatrix a = ComplexMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  ComplexMatrix generator = beta * a.adjoint() - std::conj(beta) * a;
  return generator.exp();
}

FockVector apply_single_mode(const FockVector& psi, int mode, const ComplexMatrix& op) {
  ComplexVector amps = psi.amplitudes();
  detail::apply_single_mode(psi.basis(), mode, op,
                            std::span<Complex>(amps.data(), static_cast<std::size_t>(amps.size())));
  return {psi.basis(), std::move(amps)};
}

DensityOp apply_single_mode(const DensityOp& rho, int mode, const ComplexMatrix& op) {
  const FockBasis& basis = rho.basis();
  return {basis, detail::conjugate_columns(rho.matrix(), [&](std::span<Complex> col) {
            detail::apply_single_mode(basis, mode, op, col);
          })};
}

FockVector apply_displacement(const FockVector& state, int mode, const DisplacementSpec& spec) {
  validate(spec);
  return apply_single_mode(state, mode, displacement_operator(spec.beta, state.cutoff()));
}

DensityOp apply_displacement(const DensityOp& state, int mode, const DisplacementSpec& spec) {
  validate(spec);
  return apply_single_mode(state, mode, displacement_operator(spec.beta, state.cutoff()));
}

namespace {
ComplexMatrix phase_operator(double phi, int cutoff) {
  ComplexMatrix op = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) op(n, n) = std::polar(1.0, phi * n);
  return op;
}
}  // namespace

FockVector apply_phase_shift(const FockVector& state, int mode, double phi) {
  return apply_single_mode(state, mode, phase_operator(phi, state.cutoff()));
}

DensityOp apply_phase_shift(const DensityOp& state, int mode, double phi) {
  return apply_single_mode(state, mode, phase_operator(phi, state.cutoff()));
}

BeamSplitterBlocks::BeamSplitterBlocks(const BeamSplitterSpec& spec, int cutoff) : cutoff_(cutoff) {
  validate(spec);
  const double t = std::sqrt(spec.transmissivity);
  const double s = std::sqrt(1.0 - spec.transmissivity);
  const Complex first_to_second = std::polar(s, spec.phase);    // a1^dag -> e^{i phi} s a2^dag
  const Complex second_to_first = -std::polar(s, -spec.phase);  // a2^dag -> -e^{-i phi} s a1^dag
  blocks_.reserve(static_cast<std::size_t>(2 * cutoff + 1));
  for (int total = 0; total <= 2 * cutoff; ++total) {
    ComplexMatrix block = ComplexMatrix::Zero(total + 1, total + 1);
    for (int k = 0; k <= total; ++k) {
      const int l = total - k;
      // (t a1 + f a2)^k (g a1 + t a2)^l / sqrt(k! l!): p of the first factor's
      // and q of the second factor's creation operators land in mode 1.
      for (int p = 0; p <= k; ++p) {
        for (int q = 0; q <= l; ++q) {
          const int m = p + q;
          Complex c = binomial(k, p) * binomial(l, q) * std::pow(t, p) * ipow(first_to_second, k - p) *
                      ipow(second_to_first, q) * std::pow(t, l - q);
          c *= std::sqrt(factorial(m) * factorial(total - m) / (factorial(k) * factorial(l)));
          block(m, k) += c;
        }
      }
    }
    blocks_.push_back(std::move(block));
  }
}

void BeamSplitterBlocks::apply(const FockBasis& basis, int i, int j, std::span<Complex> data) const {
  if (i == j) throw std::invalid_argument("beam splitter needs two distinct modes");
  if (basis.cutoff() != cutoff_) throw std::invalid_argument("incompatible bases");
  const std::size_t si = basis.stride(i);
  const std::size_t sj = basis.stride(j);
  const int levels = basis.levels();
  std::vector<Complex> in(static_cast<std::size_t>(2 * cutoff_ + 1));
  std::vector<Complex> out(in.size());
  for (std::size_t base = 0; base < basis.dimension(); ++base) {
    if ((base / si) % static_cast<std::size_t>(levels) != 0 ||
        (base / sj) % static_cast<std::size_t>(levels) != 0) {
      continue;
    }
    for (int total = 1; total <= 2 * cutoff_; ++total) {
      const int kmin = std::max(0, total - cutoff_);
      const int kmax = std::min(total, cutoff_);
      for (int k = kmin; k <= kmax; ++k) {
        in[static_cast<std::size_t>(k)] =
            data[base + static_cast<std::size_t>(k) * si + static_cast<std::size_t>(total - k) * sj];
      }
      const ComplexMatrix& b = blocks_[static_cast<std::size_t>(total)];
      for (int m = kmin; m <= kmax; ++m) {
        Complex acc = 0.0;
        for (int k = kmin; k <= kmax; ++k) acc += b(m, k) * in[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(m)] = acc;
      }
      for (int m = kmin; m <= kmax; ++m) {
        data[base + static_cast<std::size_t>(m) * si + static_cast<std::size_t>(total - m) * sj] =
            out[static_cast<std::size_t>(m)];
      }
    }
  }
}

FockVector apply_beam_splitter(const FockVector& state, int i, int j, const BeamSplitterSpec& spec) {
  detail::check_modes(state.basis(), std::vector<int>{i, j});
  BeamSplitterBlocks blocks(spec, state.cutoff());
  ComplexVector amps = state.amplitudes();
  blocks.apply(state.basis(), i, j, std::span<Complex>(amps.data(), static_cast<std::size_t>(amps.size())));
  return {state.basis(), std::move(amps)};
}

DensityOp apply_beam_splitter(const DensityOp& state, int i, int j, const BeamSplitterSpec& spec) {
  detail::check_modes(state.basis(), std::vector<int>{i, j});
  BeamSplitterBlocks blocks(spec, state.cutoff());
  const FockBasis& basis = state.basis();
  return {basis, detail::conjugate_columns(state.matrix(),
                                           [&](std::span<Complex> col) { blocks.apply(basis, i, j, col); })};
}

std::vector<ComplexMatrix> loss_kraus(const LossChannelSpec& spec, int cutoff) {
  validate(spec);
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k <= cutoff; ++k) {
    ComplexMatrix op = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = k; n <= cutoff; ++n) {
      op(n - k, n) = std::sqrt(binomial(n, k)) * std::pow(spec.eta, 0.5 * (n - k)) *
                     std::pow(1.0 - spec.eta, 0.5 * k);
    }
    kraus.push_back(std::move(op));
  }
  return kraus;
}

DensityOp apply_kraus(const DensityOp& rho, int mode, const std::vector<ComplexMatrix>& kraus) {
  detail::check_modes(rho.basis(), std::vector<int>{mode});
  const FockBasis& basis = rho.basis();
  ComplexMatrix sum = ComplexMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& op : kraus) {
    if (op.isZero(0.0)) continue;
    sum += detail::conjugate_columns(rho.matrix(), [&](std::span<Complex> col) {
      detail::apply_single_mode(basis, mode, op, col);
    });
  }
  return {basis, std::move(sum)};
}

DensityOp apply_loss(const DensityOp& rho, int mode, const LossChannelSpec& spec) {
  if (spec.eta == 1.0) {
    validate(spec);
    return rho;
  }
  return apply_kraus(rho, mode, loss_kraus(spec, rho.cutoff()));
}

}  // namespace catlink
