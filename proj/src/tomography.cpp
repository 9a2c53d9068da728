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

#include "catlink/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace catlink {

const std::array<Eigen::Matrix2cd, 4>& pauli_basis() {
  static const std::array<Eigen::Matrix2cd, 4> basis = [] {
    const Complex i(0.0, 1.0);
    std::array<Eigen::Matrix2cd, 4> p;
    p[0] << 1.0, 0.0, 0.0, 1.0;
    p[1] << 0.0, 1.0, 1.0, 0.0;
    p[2] << 0.0, -i, i, 0.0;
    p[3] << 1.0, 0.0, 0.0, -1.0;
    return p;
  }();
  return basis;
}

Eigen::Vector3d bloch_vector(const Eigen::Matrix2cd& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

Eigen::Matrix2cd density_from_bloch(const Eigen::Vector3d& s) {
  const auto& p = pauli_basis();
  return 0.5 * (p[0] + s(0) * p[1] + s(1) * p[2] + s(2) * p[3]);
}

namespace {

// A[(i, j), (m, n)] = Tr[P_i P_m P_j P_n] / 2, so that vec(R) = A vec(chi)
// with R the Pauli transfer matrix R_ij = Tr[P_i E(P_j)] / 2.
const Eigen::Matrix<Complex, 16, 16>& transfer_operator() {
  static const Eigen::Matrix<Complex, 16, 16> a = [] {
    const auto& p = pauli_basis();
    Eigen::Matrix<Complex, 16, 16> out;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int m = 0; m < 4; ++m)
          for (int n = 0; n < 4; ++n) out(4 * i + j, 4 * m + n) = 0.5 * (p[i] * p[m] * p[j] * p[n]).trace();
    return out;
  }();
  return a;
}

Eigen::Matrix4cd transfer_from_chi(const Eigen::Matrix4cd& chi) {
  Eigen::Matrix<Complex, 16, 1> v;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) v(4 * m + n) = chi(m, n);
  const Eigen::Matrix<Complex, 16, 1> r = transfer_operator() * v;
  Eigen::Matrix4cd out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = r(4 * i + j);
  return out;
}

}  // namespace

Eigen::Matrix4cd chi_from_bloch(const Eigen::Matrix3d& m, const Eigen::Vector3d& t) {
  Eigen::Matrix<Complex, 16, 1> r = Eigen::Matrix<Complex, 16, 1>::Zero();
  r(0) = 1.0;
  for (int i = 1; i < 4; ++i) {
    r(4 * i) = t(i - 1);
    for (int j = 1; j < 4; ++j) r(4 * i + j) = m(i - 1, j - 1);
  }
  static const Eigen::FullPivLU<Eigen::Matrix<Complex, 16, 16>> lu(transfer_operator());
  const Eigen::Matrix<Complex, 16, 1> v = lu.solve(r);
  Eigen::Matrix4cd chi;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) chi(a, b) = v(4 * a + b);
  return 0.5 * (chi + chi.adjoint());
}

void bloch_from_chi(const Eigen::Matrix4cd& chi, Eigen::Matrix3d& m, Eigen::Vector3d& t) {
  const Eigen::Matrix4cd r = transfer_from_chi(chi);
  for (int i = 1; i < 4; ++i) {
    t(i - 1) = r(i, 0).real();
    for (int j = 1; j < 4; ++j) m(i - 1, j - 1) = r(i, j).real();
  }
}

Eigen::Matrix4cd project_to_channel(const Eigen::Matrix4cd& chi) {
  const Eigen::Matrix4cd h = 0.5 * (chi + chi.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(h);
  Eigen::Vector4d w = eig.eigenvalues();
  // Euclidean projection of the spectrum onto the probability simplex.
  std::array<double, 4> sorted{w(0), w(1), w(2), w(3)};
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (int k = 0; k < 4; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double candidate = (cumulative - 1.0) / (k + 1);
    if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) theta = candidate;
  }
  for (int k = 0; k < 4; ++k) w(k) = std::max(w(k) - theta, 0.0);
  const Eigen::Matrix4cd out = eig.eigenvectors() * w.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint());
}

Eigen::Matrix2cd apply_chi(const Eigen::Matrix4cd& chi, const Eigen::Matrix2cd& rho) {
  const auto& p = pauli_basis();
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) out += chi(m, n) * p[m] * rho * p[n].adjoint();
  return out;
}

ProcessMap process_map_from_chi(const Eigen::Matrix4cd& chi) {
  ProcessMap map;
  map.chi = chi;
  bloch_from_chi(chi, map.bloch_matrix, map.bloch_offset);
  map.process_fidelity = chi(0, 0).real();
  return map;
}

ProcessMap process_tomography(std::span<const TomographyPair> pairs) {
  const auto count = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd inputs(count, 4);
  Eigen::MatrixXd outputs(count, 3);
  std::vector<double> renormalization;
  for (Eigen::Index k = 0; k < count; ++k) {
    const auto& pair = pairs[static_cast<std::size_t>(k)];
    const double in_trace = pair.input.trace().real();
    const double out_trace = pair.output.trace().real();
    if (!(in_trace > 0.0) || !(out_trace > 0.0)) throw std::invalid_argument("tomography pair with empty state");
    inputs.row(k) << bloch_vector(pair.input / in_trace).transpose(), 1.0;
    outputs.row(k) = bloch_vector(pair.output / out_trace).transpose();
    renormalization.push_back(out_trace);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(inputs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (count < 4 || sv(3) <= 1e-9 * sv(0)) throw std::invalid_argument("inputs do not span the Bloch sphere");
  const Eigen::MatrixXd x = svd.solve(outputs);  // 4 x 3, rows: M^T then t^T
  const Eigen::Matrix3d m = x.topRows(3).transpose();
  const Eigen::Vector3d t = x.row(3).transpose();

  ProcessMap map = process_map_from_chi(project_to_channel(chi_from_bloch(m, t)));
  map.renormalization = std::move(renormalization);
  return map;
}

double average_fidelity(const Eigen::Matrix4cd& chi) {
  constexpr int kPhiPoints = 16;
  auto ring = [&](double u) {
    const double theta = std::acos(std::clamp(u, -1.0, 1.0));
    double sum = 0.0;
    for (int k = 0; k < kPhiPoints; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / kPhiPoints;
      Eigen::Vector2cd psi(std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi));
      const Eigen::Matrix2cd rho = psi * psi.adjoint();
      sum += (psi.adjoint() * apply_chi(chi, rho) * psi)(0, 0).real();
    }
    return sum / kPhiPoints;
  };
  return 0.5 * boost::math::quadrature::gauss<double, 8>::integrate(ring, -1.0, 1.0);
}

ThresholdReport classical_thresholds(std::span<const double> state_fidelities, const ProcessMap& process) {
  ThresholdReport report;
  double sum = 0.0;
  for (double f : state_fidelities) sum += f;
  report.average_state_fidelity = state_fidelities.empty() ? 0.0 : sum / static_cast<double>(state_fidelities.size());
  report.average_fidelity = average_fidelity(process.chi);
  report.process_fidelity = process.process_fidelity;
  report.average_pass = report.average_state_fidelity > report.average_fidelity_bound;
  report.process_pass = report.process_fidelity > report.process_fidelity_bound;
  return report;
}

}  // namespace catlink
