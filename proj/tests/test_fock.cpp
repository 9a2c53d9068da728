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

#include <catch2/catch_amalgamated.hpp>

#include "catlink/errors.hpp"
#include "catlink/fock.hpp"
#include "catlink/optics.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace catlink;
using catlink::testing::random_density;
using catlink::testing::random_state;
using Catch::Matchers::WithinAbs;

TEST_CASE("basis index round-trips exhaustively", "[fock]") {
  for (int cutoff = 1; cutoff <= 4; ++cutoff) {
    FockBasis basis(3, cutoff);
    REQUIRE(basis.dimension() == static_cast<std::size_t>(std::pow(cutoff + 1, 3)));
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
      const auto occ = basis.occupation_of(i);
      REQUIRE(basis.index_of(occ) == i);
    }
  }
  FockBasis basis(3, 4);
  CHECK(basis.index_of({1, 0, 0}) == 25);
  CHECK(basis.index_of({0, 0, 1}) == 1);
  CHECK(basis.stride(0) == 25);
}

TEST_CASE("basis rejects bad shapes", "[fock]") {
  CHECK_THROWS_AS(FockBasis(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(FockBasis(1, 0), std::invalid_argument);
  FockBasis basis(2, 3);
  CHECK_THROWS_AS(basis.index_of({4, 0}), std::invalid_argument);
  CHECK_THROWS_AS(basis.index_of({1}), std::invalid_argument);
}

TEST_CASE("tensor products", "[fock]") {
  const auto v0 = FockVector::vacuum(1, 5);
  const auto one = FockVector::number_state(5, {1});
  const auto vv = tensor(v0, v0);
  CHECK(vv.num_modes() == 2);
  CHECK(vv.amplitude({0, 0}) == Complex(1.0));
  const auto ten = tensor(one, v0);
  CHECK(ten.amplitude({1, 0}) == Complex(1.0));
  CHECK(ten.squared_norm() == 1.0);

  CHECK_THROWS_WITH(tensor(v0, FockVector::vacuum(1, 4)), "incompatible bases");

  std::mt19937_64 gen(11);
  for (int k = 0; k < 100; ++k) {
    const auto a = random_state(1, 4, gen);
    const auto b = random_state(2, 3 + 1, gen);
    const auto ab = tensor(a, b);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < ab.amplitudes().size(); ++i) sum += std::norm(ab.amplitudes()(i));
    REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("partial trace", "[fock]") {
  const auto vv = DensityOp::pure(FockVector::vacuum(2, 3));
  const auto r = partial_trace(vv, {0});
  CHECK(r.num_modes() == 1);
  CHECK(r.element({0}, {0}) == Complex(1.0));

  FockBasis b2(2, 3);
  ComplexVector amp = ComplexVector::Zero(16);
  amp(b2.index_of({0, 1})) = amp(b2.index_of({1, 0})) = 1.0 / std::sqrt(2.0);
  const auto bell = DensityOp::pure(FockVector(b2, amp));
  for (int keep : {0, 1}) {
    const auto m = partial_trace(bell, {keep});
    CHECK_THAT(m.element({0}, {0}).real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(m.element({1}, {1}).real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(std::abs(m.element({0}, {1})), WithinAbs(0.0, 1e-15));
  }

  CHECK_THROWS_AS(partial_trace(bell, std::span<const int>{}), std::invalid_argument);

  const double r_sq = 0.4;
  const int cutoff = 20;
  const auto tmss = two_mode_squeezed_vacuum({r_sq, 0.3}, cutoff);
  const auto marginal = reduced_density(tmss, {1});
  double norm = 0.0;
  for (int n = 0; n <= cutoff; ++n) norm += std::pow(std::tanh(r_sq), 2 * n) / std::pow(std::cosh(r_sq), 2);
  for (int n = 0; n <= cutoff; ++n) {
    const double expect = std::pow(std::tanh(r_sq), 2 * n) / std::pow(std::cosh(r_sq), 2) / norm;
    REQUIRE_THAT(marginal.element({n}, {n}).real(), WithinAbs(expect, 1e-12));
  }
}

TEST_CASE("partial trace inverts tensor on random states", "[fock][property]") {
  std::mt19937_64 gen(5);
  for (int k = 0; k < 25; ++k) {
    const int cutoff = 2 + k % 5;
    const auto a = random_density(1, cutoff, gen);
    const auto b = random_density(1, cutoff, gen);
    const auto back = partial_trace(tensor(a, b), {0});
    REQUIRE(testing::max_abs(back.matrix() - a.matrix()) < 1e-12);
    const auto other = partial_trace(tensor(a, b), {1});
    REQUIRE(testing::max_abs(other.matrix() - b.matrix()) < 1e-12);
    REQUIRE_THAT(other.trace(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("fidelity", "[fock]") {
  const auto zero = DensityOp::pure(FockVector::number_state(6, {0}));
  const auto one = DensityOp::pure(FockVector::number_state(6, {1}));
  CHECK_THAT(fidelity(zero, zero), WithinAbs(1.0, 1e-12));
  CHECK_THAT(fidelity(zero, one), WithinAbs(0.0, 1e-12));

  const int cutoff = 12;
  const auto coh = DensityOp::pure(coherent_state(1.0, cutoff));
  double norm = 0.0;
  for (int n = 0; n <= cutoff; ++n) norm += std::norm(testing::coherent_coefficient(1.0, n));
  const double expect = std::norm(testing::coherent_coefficient(1.0, 0)) / norm;
  CHECK_THAT(fidelity(DensityOp::pure(FockVector::vacuum(1, cutoff)), coh),
             WithinAbs(expect, 1e-12));
  CHECK_THAT(expect, WithinAbs(std::exp(-1.0), 1e-9));

  std::mt19937_64 gen(3);
  for (int k = 0; k < 20; ++k) {
    const auto rho = random_density(1, 4, gen);
    const auto sigma = random_density(1, 4, gen);
    REQUIRE_THAT(fidelity(rho, sigma), WithinAbs(fidelity(sigma, rho), 1e-10));
    REQUIRE_THAT(fidelity(rho, rho), WithinAbs(1.0, 1e-9));
    const auto psi = random_state(1, 4, gen);
    const auto phi = random_state(1, 4, gen);
    const double overlap = std::norm(psi.amplitudes().dot(phi.amplitudes()));
    REQUIRE_THAT(fidelity(psi, phi), WithinAbs(overlap, 1e-12));
    REQUIRE_THAT(fidelity(DensityOp::pure(psi), DensityOp::pure(phi)), WithinAbs(overlap, 1e-10));
    const double expectation = psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
    REQUIRE_THAT(fidelity(rho, DensityOp::pure(psi)), WithinAbs(expectation, 1e-10));
    REQUIRE_THAT(fidelity(rho, psi), WithinAbs(expectation, 1e-12));
  }
}

TEST_CASE("density validation and positivity", "[fock]") {
  FockBasis basis(1, 1);
  ComplexMatrix bad(2, 2);
  bad << 0.5, 0.2, 0.1, 0.5;
  CHECK_THROWS_AS(DensityOp(basis, bad), InvalidStateError);
  ComplexMatrix neg(2, 2);
  neg << 1.2, 0.0, 0.0, -0.2;
  DensityOp rho(basis, neg);
  CHECK_THROWS_WITH(validate_positive(rho), Catch::Matchers::StartsWith("invalid density operator"));
  CHECK_THROWS_AS(fidelity(rho, rho), InvalidStateError);

  ComplexMatrix tiny(2, 2);
  tiny << 1.0 + 5e-11, 0.0, 0.0, -5e-11;
  const auto fixed = enforce_positivity(DensityOp(basis, tiny));
  CHECK(fixed.element({1}, {1}).real() >= 0.0);
  CHECK_THAT(fixed.trace(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("normalize", "[fock]") {
  FockBasis basis(1, 3);
  ComplexVector half = ComplexVector::Zero(4);
  half(0) = 0.5;
  const auto n = normalize(FockVector(basis, half));
  CHECK(n.weight == 0.25);
  CHECK(n.state.amplitude({0}) == Complex(1.0));
  CHECK_THAT(normalize(FockVector::vacuum(1, 3)).weight, WithinAbs(1.0, 1e-12));
  CHECK_THROWS_AS(normalize(FockVector(basis, ComplexVector::Zero(4))), NullStateError);
  CHECK_THROWS_WITH(normalize(FockVector(basis, ComplexVector::Zero(4))), "null state after conditioning");

  std::mt19937_64 gen(8);
  for (int k = 0; k < 20; ++k) {
    ComplexVector v = testing::random_amplitudes(4, gen) * 0.3;
    const auto out = normalize(FockVector(basis, v));
    REQUIRE_THAT(out.state.squared_norm(), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(out.weight, WithinAbs(0.09, 1e-12));
  }
}

TEST_CASE("photon statistics and debug dump", "[fock]") {
  const auto psi = FockVector::number_state(3, {2, 1});
  CHECK(mean_photon_number(psi, 0) == 2.0);
  CHECK(mean_photon_number(DensityOp::pure(psi), 1) == 1.0);
  const auto dist = photon_distribution(psi, 0);
  CHECK(dist.size() == 4);
  CHECK(dist[2] == 1.0);

  const auto j = nlohmann::json::parse(to_debug_json(FockVector::number_state(2, {1})));
  CHECK(j["cutoff"] == 2);
  CHECK(j["modes"] == 1);
  REQUIRE(j["amplitudes"].size() == 3);
  CHECK(j["amplitudes"][1][0] == 1.0);
}
