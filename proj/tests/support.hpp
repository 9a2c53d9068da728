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


#ifndef CATLINK_TESTS_SUPPORT_HPP
#define CATLINK_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "catlink/fock.hpp"

namespace catlink::testing {

inline ComplexVector random_amplitudes(std::size_t dim, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(g(gen), g(gen));
  return v / v.norm();
}

inline FockVector random_state(int modes, int cutoff, std::mt19937_64& gen) {
  FockBasis basis(modes, cutoff);
  return FockVector(basis, random_amplitudes(basis.dimension(), gen));
}

/// Random full-rank density operator, rho = G G^dag / Tr.
inline DensityOp random_density(int modes, int cutoff, std::mt19937_64& gen) {
  FockBasis basis(modes, cutoff);
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  std::normal_distribution<double> g;
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(gen), g(gen));
  ComplexMatrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOp(basis, rho);
}

/// Annihilation operator on levels 0..dim-1.
inline ComplexMatrix annihilation(int dim) {
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// Two-mode beam splitter exp(theta (e^{i phi} b^dag a - e^{-i phi} a^dag b)) built on a
/// padded space and restricted to levels 0..cutoff.
inline ComplexMatrix dense_beam_splitter(double transmissivity, double phase, int cutoff, int pad = 10) {
  const int d = cutoff + 1 + pad;
  const ComplexMatrix a = annihilation(d);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix a1 = Eigen::kroneckerProduct(a, id).eval();
  const ComplexMatrix a2 = Eigen::kroneckerProduct(id, a).eval();
  const double theta = std::acos(std::sqrt(transmissivity));
  const Complex e = std::polar(1.0, phase);
  const ComplexMatrix gen =
      theta * (e * a2.adjoint() * a1 - std::conj(e) * a1.adjoint() * a2);
  const ComplexMatrix u = gen.exp();
  const int k = cutoff + 1;
  ComplexMatrix out(k * k, k * k);
  for (int m = 0; m < k; ++m)
    for (int n = 0; n < k; ++n)
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q) out(m * k + n, p * k + q) = u(m * d + n, p * d + q);
  return out;
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

/// e^{-|a|^2/2} a^n / sqrt(n!) without renormalization.
inline Complex coherent_coefficient(Complex alpha, int n) {
  return std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(factorial(n));
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline std::string source_path(const std::string& relative) {
  return std::string(CATLINK_SOURCE_DIR) + "/" + relative;
}

}  // namespace catlink::testing

#endif  // CATLINK_TESTS_SUPPORT_HPP
