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


#include <cmath>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "catlink/tomography.hpp"
#include "support.hpp"

using namespace catlink;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Eigen::Matrix2cd;
using Eigen::Matrix4cd;

namespace {

using Kraus = std::vector<Matrix2cd>;

Matrix2cd apply_kraus(const Kraus& ks, const Matrix2cd& rho) {
  Matrix2cd out = Matrix2cd::Zero();
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

// chi_mn = sum_k a_km conj(a_kn) with K_k = sum_m a_km P_m, a_km = Tr(P_m K_k) / 2.
Matrix4cd chi_from_kraus(const Kraus& ks) {
  const auto& p = pauli_basis();
  Matrix4cd chi = Matrix4cd::Zero();
  for (const auto& k : ks) {
    Eigen::Vector4cd a;
    for (int m = 0; m < 4; ++m) a(m) = (p[m] * k).trace() / 2.0;
    chi += a * a.adjoint();
  }
  return chi;
}

std::vector<Matrix2cd> six_inputs() {
  std::vector<Matrix2cd> out;
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<std::pair<Complex, Complex>> kets = {
      {1.0, 0.0}, {0.0, 1.0}, {s, s}, {s, -s}, {s, Complex(0.0, s)}, {s, Complex(0.0, -s)}};
  for (const auto& [a, b] : kets) {
    Eigen::Vector2cd v(a, b);
    out.push_back(v * v.adjoint());
  }
  return out;
}

std::vector<TomographyPair> pairs_through(const Kraus& ks) {
  std::vector<TomographyPair> pairs;
  for (const auto& in : six_inputs()) pairs.push_back({in, apply_kraus(ks, in)});
  return pairs;
}

Kraus depolarizing(double p) {
  const auto& s = pauli_basis();
  return {std::sqrt(1.0 - 3.0 * p / 4.0) * s[0], std::sqrt(p / 4.0) * s[1], std::sqrt(p / 4.0) * s[2],
          std::sqrt(p / 4.0) * s[3]};
}

Kraus amplitude_damping(double gamma) {
  Matrix2cd k0, k1;
  k0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
  k1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
  return {k0, k1};
}

// Random CPTP map from an isometry C^2 -> C^2 (x) C^3.
Kraus random_channel(std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(6, 2);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(g(gen), g(gen));
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(m).householderQ() * Eigen::MatrixXcd::Identity(6, 2);
  Kraus ks;
  for (int k = 0; k < 3; ++k) ks.push_back(q.block(2 * k, 0, 2, 2));
  return ks;
}

}  // namespace

TEST_CASE("Bloch vectors", "[tomography]") {
  const auto inputs = six_inputs();
  CHECK((bloch_vector(inputs[0]) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  CHECK((bloch_vector(inputs[2]) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  CHECK((bloch_vector(inputs[4]) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-15);
  std::mt19937_64 gen(1);
  for (int k = 0; k < 10; ++k) {
    const auto rho = testing::random_density(1, 1, gen).matrix();
    const Matrix2cd m = rho;
    REQUIRE((density_from_bloch(bloch_vector(m)) - m).cwiseAbs().maxCoeff() < 1e-14);
  }
  const auto& p = pauli_basis();
  CHECK((p[1] * p[2] - Complex(0.0, 1.0) * p[3]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identity channel recovery", "[tomography]") {
  const auto map = process_tomography(pairs_through({Matrix2cd::Identity()}));
  CHECK_THAT(map.process_fidelity, WithinAbs(1.0, 1e-8));
  CHECK((map.bloch_matrix - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(map.bloch_offset.norm() < 1e-10);
  CHECK_THAT(average_fidelity(map.chi), WithinAbs(1.0, 1e-8));
  REQUIRE(map.renormalization.size() == 6);
  for (double r : map.renormalization) CHECK_THAT(r, WithinAbs(1.0, 1e-12));
}

TEST_CASE("synthetic channels", "[tomography]") {
  const auto dep = process_tomography(pairs_through(depolarizing(0.2)));
  CHECK_THAT(dep.process_fidelity, WithinAbs(0.85, 1e-10));
  CHECK((dep.bloch_matrix - 0.8 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-10);

  const auto damp = amplitude_damping(0.3);
  const auto map = process_tomography(pairs_through(damp));
  CHECK((map.chi - chi_from_kraus(damp)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THAT(map.bloch_offset(2), WithinAbs(0.3, 1e-12));
  CHECK_THAT(map.process_fidelity, WithinAbs(std::pow(1.0 + std::sqrt(0.7), 2) / 4.0, 1e-10));

  // Leakage-renormalized outputs: scaling an output block only changes the reported weight.
  auto pairs = pairs_through(damp);
  pairs[3].output *= 0.8;
  const auto scaled = process_tomography(pairs);
  CHECK_THAT(scaled.renormalization[3], WithinAbs(0.8, 1e-12));
  CHECK((scaled.chi - map.chi).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("process fitting invariants", "[tomography][property]") {
  std::mt19937_64 gen(77);
  for (int k = 0; k < 20; ++k) {
    const auto ks = random_channel(gen);
    const auto map = process_tomography(pairs_through(ks));
    const Matrix4cd expect = chi_from_kraus(ks);
    REQUIRE((map.chi - expect).cwiseAbs().maxCoeff() < 1e-9);
    REQUIRE_THAT(average_fidelity(map.chi), WithinAbs((2.0 * map.process_fidelity + 1.0) / 3.0, 1e-8));
    REQUIRE((map.chi - map.chi.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE_THAT(map.chi.trace().real(), WithinAbs(1.0, 1e-10));

    Eigen::Matrix3d m;
    Eigen::Vector3d t;
    bloch_from_chi(map.chi, m, t);
    REQUIRE((m - map.bloch_matrix).cwiseAbs().maxCoeff() < 1e-8);
    REQUIRE((t - map.bloch_offset).norm() < 1e-8);
    REQUIRE((chi_from_bloch(m, t) - map.chi).cwiseAbs().maxCoeff() < 1e-8);

    const Matrix2cd probe = testing::random_density(1, 1, gen).matrix();
    REQUIRE((apply_chi(map.chi, probe) - apply_kraus(ks, probe)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("projection onto channels", "[tomography]") {
  Matrix4cd noisy = chi_from_kraus(depolarizing(0.1));
  noisy(0, 0) += 0.05;
  noisy(3, 3) -= 0.08;
  noisy(1, 2) += Complex(0.02, 0.01);
  noisy(2, 1) = std::conj(noisy(1, 2));
  const Matrix4cd chi = project_to_channel(noisy);
  Eigen::SelfAdjointEigenSolver<Matrix4cd> eig(chi);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
  CHECK_THAT(chi.trace().real(), WithinAbs(1.0, 1e-10));
  CHECK((project_to_channel(chi) - chi).cwiseAbs().maxCoeff() < 1e-12);

  const Matrix4cd valid = chi_from_kraus(amplitude_damping(0.4));
  CHECK((project_to_channel(valid) - valid).cwiseAbs().maxCoeff() < 1e-12);
  const auto map = process_map_from_chi(valid);
  CHECK_THAT(map.process_fidelity, WithinAbs(valid(0, 0).real(), 1e-15));
}

TEST_CASE("rank-deficient inputs are rejected", "[tomography]") {
  const auto inputs = six_inputs();
  std::vector<TomographyPair> pairs = {{inputs[0], inputs[0]}, {inputs[1], inputs[1]}, {inputs[2], inputs[2]},
                                       {inputs[3], inputs[3]}};
  CHECK_THROWS_WITH(process_tomography(pairs), ContainsSubstring("inputs do not span the Bloch sphere"));
  pairs.resize(3);
  CHECK_THROWS_WITH(process_tomography(pairs), ContainsSubstring("inputs do not span the Bloch sphere"));
}

TEST_CASE("classical thresholds", "[tomography]") {
  CHECK(kClassicalAverageFidelity == 2.0 / 3.0);
  CHECK(kClassicalProcessFidelity == 0.5);
  CHECK(kReferenceStateBound == 0.74);

  const auto ideal = process_tomography(pairs_through({Matrix2cd::Identity()}));
  const std::vector<double> perfect(6, 1.0);
  const auto pass = classical_thresholds(perfect, ideal);
  CHECK(pass.pass());
  CHECK(pass.average_state_fidelity == 1.0);

  const auto mixed = process_tomography(pairs_through(depolarizing(1.0)));
  CHECK_THAT(mixed.process_fidelity, WithinAbs(0.25, 1e-10));
  const std::vector<double> half(6, 0.5);
  const auto fail = classical_thresholds(half, mixed);
  CHECK_FALSE(fail.pass());
  CHECK_FALSE(fail.process_pass);
  CHECK_FALSE(fail.average_pass);
  CHECK_THAT(fail.average_fidelity, WithinAbs(0.5, 1e-8));
}
