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

#include "catlink/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "catlink/detail/indexing.hpp"
#include "catlink/errors.hpp"

namespace catlink {

namespace {

void require_same_cutoff(const FockBasis& a, const FockBasis& b) {
  if (a.cutoff() != b.cutoff()) throw std::invalid_argument("incompatible bases");
}

void require_same_basis(const FockBasis& a, const FockBasis& b) {
  if (a != b) throw std::invalid_argument("incompatible bases");
}

// Eigen-decomposition with the positivity check shared by fidelity and
// enforce_positivity.
Eigen::SelfAdjointEigenSolver<ComplexMatrix> checked_spectrum(const DensityOp& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
  if (solver.info() != Eigen::Success) {
    throw InvalidStateError("eigendecomposition failed");
  }
  const double smallest = solver.eigenvalues().minCoeff();
  if (smallest < -kPositivityTolerance) {
    throw InvalidStateError("eigenvalue " + std::to_string(smallest) + " below tolerance");
  }
  return solver;
}

ComplexMatrix positive_sqrt(const Eigen::SelfAdjointEigenSolver<ComplexMatrix>& solver) {
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double floor = static_cast<double>(values.size()) * std::numeric_limits<double>::epsilon() *
                       std::max(values.cwiseAbs().maxCoeff(), 1.0);
  Eigen::VectorXd roots = values.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

std::vector<int> as_vector(std::initializer_list<int> list) { return {list.begin(), list.end()}; }

}  // namespace

// ---------------------------------------------------------------- FockBasis

FockBasis::FockBasis(int num_modes, int cutoff) : num_modes_(num_modes), cutoff_(cutoff) {
  if (num_modes < 1) throw std::invalid_argument("FockBasis needs at least one mode");
  if (cutoff < 1) throw std::invalid_argument("FockBasis cutoff must be >= 1");
  dimension_ = 1;
  for (int m = 0; m < num_modes; ++m) dimension_ *= static_cast<std::size_t>(levels());
}

std::size_t FockBasis::stride(int mode) const {
  if (mode < 0 || mode >= num_modes_) throw std::invalid_argument("mode index out of range");
  std::size_t s = 1;
  for (int m = mode + 1; m < num_modes_; ++m) s *= static_cast<std::size_t>(levels());
  return s;
}

std::size_t FockBasis::index_of(std::span<const int> occupation) const {
  if (static_cast<int>(occupation.size()) != num_modes_) {
    throw std::invalid_argument("occupation tuple has wrong length");
  }
  std::size_t index = 0;
  for (int n : occupation) {
    if (n < 0 || n > cutoff_) throw std::invalid_argument("occupation exceeds cutoff");
    index = index * static_cast<std::size_t>(levels()) + static_cast<std::size_t>(n);
  }
  return index;
}

std::vector<int> FockBasis::occupation_of(std::size_t index) const {
  if (index >= dimension_) throw std::invalid_argument("basis index out of range");
  std::vector<int> occ(static_cast<std::size_t>(num_modes_));
  const auto l = static_cast<std::size_t>(levels());
  for (int m = num_modes_ - 1; m >= 0; --m) {
    occ[static_cast<std::size_t>(m)] = static_cast<int>(index % l);
    index /= l;
  }
  return occ;
}

int FockBasis::occupation(std::size_t index, int mode) const {
  return static_cast<int>((index / stride(mode)) % static_cast<std::size_t>(levels()));
}

// --------------------------------------------------------------- FockVector

FockVector::FockVector(FockBasis basis, ComplexVector amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_.dimension()) {
    throw std::invalid_argument("amplitude count does not match basis dimension");
  }
  if (amplitudes_.squaredNorm() > 1.0 + 1e-10) {
    throw std::invalid_argument("state has squared norm above one");
  }
}

FockVector FockVector::vacuum(int num_modes, int cutoff) {
  FockBasis basis(num_modes, cutoff);
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  amps(0) = 1.0;
  return {basis, std::move(amps)};
}

FockVector FockVector::number_state(int cutoff, std::span<const int> occupation) {
  FockBasis basis(static_cast<int>(occupation.size()), cutoff);
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  amps(static_cast<Eigen::Index>(basis.index_of(occupation))) = 1.0;
  return {basis, std::move(amps)};
}

FockVector FockVector::number_state(int cutoff, std::initializer_list<int> occupation) {
  const auto occ = as_vector(occupation);
  return number_state(cutoff, std::span<const int>(occ));
}

Complex FockVector::amplitude(std::initializer_list<int> occupation) const {
  return amplitudes_(static_cast<Eigen::Index>(basis_.index_of(occupation)));
}

bool FockVector::is_normalized() const {
  return std::abs(squared_norm() - 1.0) <= kNormalizedTolerance;
}

// ---------------------------------------------------------------- DensityOp

DensityOp::DensityOp(FockBasis basis, ComplexMatrix matrix) : basis_(basis), matrix_(std::move(matrix)) {
  const auto dim = static_cast<Eigen::Index>(basis_.dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("density matrix does not match basis dimension");
  }
  const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermiticityTolerance) {
    throw InvalidStateError("not Hermitian (defect " + std::to_string(asym) + ")");
  }
  matrix_ = (matrix_ + matrix_.adjoint()).eval() * 0.5;
  const double tr = trace();
  if (!(tr > 0.0) || tr > 1.0 + 1e-10) {
    throw InvalidStateError("trace " + std::to_string(tr) + " outside (0, 1]");
  }
}

DensityOp DensityOp::pure(const FockVector& state) {
  return {state.basis(), state.amplitudes() * state.amplitudes().adjoint()};
}

Complex DensityOp::element(std::initializer_list<int> row, std::initializer_list<int> col) const {
  return matrix_(static_cast<Eigen::Index>(basis_.index_of(row)),
                 static_cast<Eigen::Index>(basis_.index_of(col)));
}

// --------------------------------------------------------------- operations

FockVector tensor(const FockVector& a, const FockVector& b) {
  require_same_cutoff(a.basis(), b.basis());
  FockBasis basis(a.num_modes() + b.num_modes(), a.cutoff());
  const auto nb = b.amplitudes().size();
  ComplexVector out(static_cast<Eigen::Index>(basis.dimension()));
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
  }
  return {basis, std::move(out)};
}

DensityOp tensor(const DensityOp& a, const DensityOp& b) {
  require_same_cutoff(a.basis(), b.basis());
  FockBasis basis(a.num_modes() + b.num_modes(), a.cutoff());
  const auto na = a.matrix().rows();
  const auto nb = b.matrix().rows();
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index j = 0; j < na; ++j) {
    for (Eigen::Index i = 0; i < na; ++i) {
      out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
    }
  }
  return {basis, std::move(out)};
}

DensityOp partial_trace(const DensityOp& rho, std::span<const int> keep) {
  detail::check_modes(rho.basis(), keep);
  std::vector<int> sorted_keep(keep.begin(), keep.end());
  std::sort(sorted_keep.begin(), sorted_keep.end());
  std::vector<int> traced;
  for (int m = 0; m < rho.num_modes(); ++m) {
    if (!std::binary_search(sorted_keep.begin(), sorted_keep.end(), m)) traced.push_back(m);
  }
  if (traced.empty()) return rho;
  detail::ModePartition part(rho.basis(), traced);
  const auto rest = static_cast<Eigen::Index>(part.rest_dimension());
  ComplexMatrix out = ComplexMatrix::Zero(rest, rest);
  const auto& m = rho.matrix();
  for (std::size_t g = 0; g < part.group_dimension(); ++g) {
    for (Eigen::Index c = 0; c < rest; ++c) {
      const auto fc = static_cast<Eigen::Index>(part.flat(g, static_cast<std::size_t>(c)));
      for (Eigen::Index r = 0; r < rest; ++r) {
        out(r, c) += m(static_cast<Eigen::Index>(part.flat(g, static_cast<std::size_t>(r))), fc);
      }
    }
  }
  return {FockBasis(static_cast<int>(sorted_keep.size()), rho.cutoff()), std::move(out)};
}

DensityOp partial_trace(const DensityOp& rho, std::initializer_list<int> keep) {
  const auto k = as_vector(keep);
  return partial_trace(rho, std::span<const int>(k));
}

DensityOp reduced_density(const FockVector& psi, std::span<const int> keep) {
  detail::check_modes(psi.basis(), keep);
  std::vector<int> sorted_keep(keep.begin(), keep.end());
  std::sort(sorted_keep.begin(), sorted_keep.end());
  std::vector<int> traced;
  for (int m = 0; m < psi.num_modes(); ++m) {
    if (!std::binary_search(sorted_keep.begin(), sorted_keep.end(), m)) traced.push_back(m);
  }
  if (traced.empty()) return DensityOp::pure(psi);
  detail::ModePartition part(psi.basis(), traced);
  // Psi(g, r): rows are traced configurations, columns kept ones.
  ComplexMatrix amps(static_cast<Eigen::Index>(part.group_dimension()),
                     static_cast<Eigen::Index>(part.rest_dimension()));
  for (std::size_t g = 0; g < part.group_dimension(); ++g) {
    for (std::size_t r = 0; r < part.rest_dimension(); ++r) {
      amps(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(r)) =
          psi.amplitudes()(static_cast<Eigen::Index>(part.flat(g, r)));
    }
  }
  ComplexMatrix out = amps.transpose() * amps.conjugate();
  return {FockBasis(static_cast<int>(sorted_keep.size()), psi.cutoff()), std::move(out)};
}

DensityOp reduced_density(const FockVector& psi, std::initializer_list<int> keep) {
  const auto k = as_vector(keep);
  return reduced_density(psi, std::span<const int>(k));
}

double fidelity(const DensityOp& rho, const DensityOp& sigma) {
  require_same_basis(rho.basis(), sigma.basis());
  const auto sqrt_rho = positive_sqrt(checked_spectrum(rho));
  const auto sqrt_sigma = positive_sqrt(checked_spectrum(sigma));
  ComplexMatrix product = sqrt_rho * sqrt_sigma;
  Eigen::BDCSVD<ComplexMatrix> svd(product);
  const double trace_norm = svd.singularValues().sum();
  return std::clamp(trace_norm * trace_norm, 0.0, 1.0);
}

double fidelity(const DensityOp& rho, const FockVector& psi) {
  require_same_basis(rho.basis(), psi.basis());
  const Complex value = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return std::clamp(value.real(), 0.0, 1.0);
}

double fidelity(const FockVector& psi, const FockVector& phi) {
  require_same_basis(psi.basis(), phi.basis());
  return std::clamp(std::norm(psi.amplitudes().dot(phi.amplitudes())), 0.0, 1.0);
}

Normalized<FockVector> normalize(const FockVector& state) {
  const double weight = state.squared_norm();
  if (weight <= kNullStateThreshold) throw NullStateError();
  return {FockVector(state.basis(), state.amplitudes() / std::sqrt(weight)), weight};
}

Normalized<DensityOp> normalize(const DensityOp& state) {
  const double weight = state.trace();
  if (weight <= kNullStateThreshold) throw NullStateError();
  return {DensityOp(state.basis(), state.matrix() / weight), weight};
}

void validate_positive(const DensityOp& rho) { (void)checked_spectrum(rho); }

DensityOp enforce_positivity(const DensityOp& rho) {
  const auto solver = checked_spectrum(rho);
  Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
  ComplexMatrix fixed = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
  fixed *= rho.trace() / fixed.trace().real();
  return {rho.basis(), std::move(fixed)};
}

std::vector<double> photon_distribution(const DensityOp& rho, int mode) {
  std::vector<double> dist(static_cast<std::size_t>(rho.basis().levels()), 0.0);
  for (std::size_t i = 0; i < rho.basis().dimension(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    dist[static_cast<std::size_t>(rho.basis().occupation(i, mode))] += rho.matrix()(ii, ii).real();
  }
  return dist;
}

std::vector<double> photon_distribution(const FockVector& psi, int mode) {
  std::vector<double> dist(static_cast<std::size_t>(psi.basis().levels()), 0.0);
  for (std::size_t i = 0; i < psi.basis().dimension(); ++i) {
    dist[static_cast<std::size_t>(psi.basis().occupation(i, mode))] +=
        std::norm(psi.amplitudes()(static_cast<Eigen::Index>(i)));
  }
  return dist;
}

namespace {
double mean_of(const std::vector<double>& dist) {
  double mean = 0.0;
  for (std::size_t n = 0; n < dist.size(); ++n) mean += static_cast<double>(n) * dist[n];
  return mean;
}
}  // namespace

double mean_photon_number(const DensityOp& rho, int mode) { return mean_of(photon_distribution(rho, mode)); }
double mean_photon_number(const FockVector& psi, int mode) { return mean_of(photon_distribution(psi, mode)); }

std::string to_debug_json(const FockVector& state) {
  nlohmann::ordered_json doc;
  doc["cutoff"] = state.cutoff();
  doc["modes"] = state.num_modes();
  auto amps = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) {
    amps.push_back({state.amplitudes()(i).real(), state.amplitudes()(i).imag()});
  }
  doc["amplitudes"] = std::move(amps);
  return doc.dump();
}

}  // namespace catlink
