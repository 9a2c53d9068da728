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

#include "catlink/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

#include "catlink/detail/indexing.hpp"
#include "catlink/errors.hpp"
#include "json.hpp"

namespace catlink {

void validate(const ClickDetectorSpec& spec) {
  if (!(spec.efficiency >= 0.0 && spec.efficiency <= 1.0)) {
    throw std::invalid_argument("detector efficiency must lie in [0, 1]");
  }
  if (!(spec.dark_count_prob >= 0.0 && spec.dark_count_prob < 1.0)) {
    throw std::invalid_argument("dark count probability must lie in [0, 1)");
  }
}

void validate(const HomodyneWindowSpec& spec) {
  if (!(spec.half_width > 0.0)) throw std::invalid_argument("homodyne half_width must be > 0");
  if (!std::isfinite(spec.center) || !std::isfinite(spec.quadrature_angle)) {
    throw std::invalid_argument("homodyne center and angle must be finite");
  }
  if (spec.grid_points < 64) throw std::invalid_argument("homodyne grid_points must be >= 64");
}

ClickPovm click_povm(const ClickDetectorSpec& spec, int cutoff) {
  validate(spec);
  const int levels = cutoff + 1;
  ClickPovm povm{ComplexMatrix::Identity(levels, levels), ComplexMatrix::Zero(levels, levels)};
  for (int n = 0; n < levels; ++n) {
    povm.no_click(n, n) = (1.0 - spec.dark_count_prob) * std::pow(1.0 - spec.efficiency, n);
  }
  povm.click -= povm.no_click;
  return povm;
}

ComplexMatrix photon_number_projector(int n, int cutoff) {
  if (n < 0 || n > cutoff) {
    throw std::invalid_argument("photon number " + std::to_string(n) + " outside 0.." + std::to_string(cutoff));
  }
  ComplexMatrix p = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
  p(n, n) = 1.0;
  return p;
}

Eigen::MatrixXd hermite_functions(std::span<const double> x, int cutoff) {
  Eigen::MatrixXd psi(cutoff + 1, static_cast<Eigen::Index>(x.size()));
  const double norm0 = std::pow(std::numbers::pi, -0.25);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    const double xk = x[k];
    psi(0, col) = norm0 * std::exp(-0.5 * xk * xk);
    if (cutoff >= 1) psi(1, col) = std::numbers::sqrt2 * xk * psi(0, col);
    for (int n = 1; n < cutoff; ++n) {
      psi(n + 1, col) = std::sqrt(2.0 / (n + 1)) * xk * psi(n, col) - std::sqrt(static_cast<double>(n) / (n + 1)) * psi(n - 1, col);
    }
  }
  return psi;
}

double quadrature_grid_half_range(int cutoff) {
  return std::max(6.0 / std::numbers::sqrt2, std::sqrt(2.0 * cutoff + 1.0) + 4.0);
}

namespace {

Eigen::MatrixXd simpson_gram(double lo, double hi, int intervals, int cutoff) {
  std::vector<double> x(static_cast<std::size_t>(intervals + 1));
  Eigen::VectorXd w(intervals + 1);
  const double h = (hi - lo) / intervals;
  for (int k = 0; k <= intervals; ++k) {
    x[static_cast<std::size_t>(k)] = lo + h * k;
    w(k) = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
  }
  w *= h / 3.0;
  const Eigen::MatrixXd psi = hermite_functions(x, cutoff);
  return psi * w.asDiagonal() * psi.transpose();
}

}  // namespace

ComplexMatrix homodyne_window_povm(const HomodyneWindowSpec& spec, int cutoff) {
  validate(spec);
  const double half_range = quadrature_grid_half_range(cutoff);
  const double spacing = 2.0 * half_range / (spec.grid_points - 1);
  const double lo = std::max(spec.center - spec.half_width, -half_range);
  const double hi = std::min(spec.center + spec.half_width, half_range);
  const int levels = cutoff + 1;
  if (!(hi > lo)) return ComplexMatrix::Zero(levels, levels);

  int intervals = 2 * static_cast<int>(std::ceil((hi - lo) / (2.0 * spacing)));
  intervals = std::max(intervals, 2);
  const Eigen::MatrixXd coarse = simpson_gram(lo, hi, intervals, cutoff);
  const Eigen::MatrixXd fine = simpson_gram(lo, hi, 2 * intervals, cutoff);
  const double error = (coarse - fine).cwiseAbs().maxCoeff() / 15.0;
  if (error > 1e-6) {
    const double factor = std::pow(error / 1e-6, 0.25);
    const auto suggested = static_cast<long>(std::ceil(spec.grid_points * factor * 1.2));
    throw std::invalid_argument("homodyne grid too coarse: estimated quadrature error " + std::to_string(error) +
                                "; use grid_points >= " + std::to_string(suggested));
  }
  ComplexMatrix e(levels, levels);
  for (int m = 0; m < levels; ++m) {
    for (int n = 0; n < levels; ++n) {
      e(m, n) = std::polar(fine(m, n), (m - n) * spec.quadrature_angle);
    }
  }
  return (e + e.adjoint()) * 0.5;
}

// ------------------------------------------------------------ conditioning

namespace {

void check_element(const detail::ModePartition& part, const ComplexMatrix& element) {
  const auto g = static_cast<Eigen::Index>(part.group_dimension());
  if (element.rows() != g || element.cols() != g) {
    throw std::invalid_argument("POVM element dimension does not match the measured modes");
  }
}

// out(r, r') = sum_{s, s'} E(s, s') rho((s', r), (s, r'))
ComplexMatrix condition_raw(const ComplexMatrix& rho, const detail::ModePartition& part, const ComplexMatrix& element) {
  check_element(part, element);
  const auto rest = static_cast<Eigen::Index>(part.rest_dimension());
  const auto group = part.group_dimension();
  ComplexMatrix out = ComplexMatrix::Zero(rest, rest);
  for (std::size_t s = 0; s < group; ++s) {
    for (std::size_t sp = 0; sp < group; ++sp) {
      const Complex e = element(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(sp));
      if (e == Complex(0.0)) continue;
      for (Eigen::Index c = 0; c < rest; ++c) {
        const auto col = static_cast<Eigen::Index>(part.flat(s, static_cast<std::size_t>(c)));
        for (Eigen::Index r = 0; r < rest; ++r) {
          out(r, c) += e * rho(static_cast<Eigen::Index>(part.flat(sp, static_cast<std::size_t>(r))), col);
        }
      }
    }
  }
  return (out + out.adjoint()) * 0.5;
}

void require_rest(const detail::ModePartition& part) {
  if (part.rest_modes().empty()) throw std::invalid_argument("measurement must leave at least one mode");
}

HeraldOutcome finish(const FockBasis& rest_basis, ComplexMatrix unnormalized, std::string label) {
  const double p = unnormalized.trace().real();
  if (!(p >= kNullStateThreshold)) throw HeraldError();
  ComplexMatrix post = unnormalized / p;
  return {std::min(p, 1.0), DensityOp(rest_basis, std::move(post)), std::move(label)};
}

}  // namespace

DensityOp condition_unnormalized(const DensityOp& rho, std::span<const int> modes, const ComplexMatrix& element) {
  detail::ModePartition part(rho.basis(), modes);
  require_rest(part);
  ComplexMatrix out = condition_raw(rho.matrix(), part, element);
  if (!(out.trace().real() >= kNullStateThreshold)) throw HeraldError();
  return {FockBasis(static_cast<int>(part.rest_modes().size()), rho.cutoff()), std::move(out)};
}

HeraldOutcome condition(const DensityOp& rho, std::span<const int> modes, const ComplexMatrix& element,
                        std::string label) {
  detail::ModePartition part(rho.basis(), modes);
  require_rest(part);
  return finish(FockBasis(static_cast<int>(part.rest_modes().size()), rho.cutoff()),
                condition_raw(rho.matrix(), part, element), std::move(label));
}

HeraldOutcome condition(const DensityOp& rho, int mode, const ComplexMatrix& element, std::string label) {
  const int modes[] = {mode};
  return condition(rho, std::span<const int>(modes), element, std::move(label));
}

HeraldOutcome condition(const FockVector& psi, std::span<const int> modes, const ComplexMatrix& element,
                        std::string label) {
  detail::ModePartition part(psi.basis(), modes);
  require_rest(part);
  check_element(part, element);
  const auto g = static_cast<Eigen::Index>(part.group_dimension());
  const auto r = static_cast<Eigen::Index>(part.rest_dimension());
  ComplexMatrix amps(g, r);
  for (Eigen::Index s = 0; s < g; ++s) {
    for (Eigen::Index c = 0; c < r; ++c) {
      amps(s, c) = psi.amplitudes()(static_cast<Eigen::Index>(part.flat(static_cast<std::size_t>(s), static_cast<std::size_t>(c))));
    }
  }
  ComplexMatrix out = amps.transpose() * element.transpose() * amps.conjugate();
  out = (out + out.adjoint()) * 0.5;
  return finish(FockBasis(static_cast<int>(part.rest_modes().size()), psi.cutoff()), std::move(out), std::move(label));
}

HeraldOutcome condition(const FockVector& psi, int mode, const ComplexMatrix& element, std::string label) {
  const int modes[] = {mode};
  return condition(psi, std::span<const int>(modes), element, std::move(label));
}

double herald_probability(const DensityOp& rho, std::span<const int> modes, const ComplexMatrix& element) {
  detail::ModePartition part(rho.basis(), modes);
  check_element(part, element);
  Complex total = 0.0;
  for (std::size_t s = 0; s < part.group_dimension(); ++s) {
    for (std::size_t sp = 0; sp < part.group_dimension(); ++sp) {
      const Complex e = element(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(sp));
      if (e == Complex(0.0)) continue;
      for (std::size_t r = 0; r < part.rest_dimension(); ++r) {
        total += e * rho.matrix()(static_cast<Eigen::Index>(part.flat(sp, r)), static_cast<Eigen::Index>(part.flat(s, r)));
      }
    }
  }
  return std::clamp(total.real(), 0.0, 1.0);
}

double herald_probability(const DensityOp& rho, int mode, const ComplexMatrix& element) {
  const int modes[] = {mode};
  return herald_probability(rho, std::span<const int>(modes), element);
}

// ------------------------------------------------------------ Monte Carlo

void validate(const MeasurementPlan& plan, const FockBasis& basis) {
  std::vector<int> all;
  for (const auto& det : plan.detectors) {
    if (det.povm.empty()) throw std::invalid_argument("detector '" + det.name + "' has an empty POVM");
    all.insert(all.end(), det.modes.begin(), det.modes.end());
    detail::check_modes(basis, det.modes);
    std::size_t dim = 1;
    for (std::size_t i = 0; i < det.modes.size(); ++i) dim *= static_cast<std::size_t>(basis.levels());
    ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& e : det.povm) {
      if (e.rows() != static_cast<Eigen::Index>(dim) || e.cols() != e.rows()) {
        throw std::invalid_argument("detector '" + det.name + "' has a POVM element of wrong dimension");
      }
      sum += e;
    }
    if ((sum - ComplexMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument("detector '" + det.name + "' POVM does not sum to identity");
    }
  }
  if (!all.empty()) detail::check_modes(basis, all);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

struct OutcomeNode {
  std::vector<double> conditional;
  std::vector<std::unique_ptr<OutcomeNode>> children;
};

std::unique_ptr<OutcomeNode> build_tree(const ComplexMatrix& rho, std::vector<int> live_modes, int cutoff,
                                        const MeasurementPlan& plan, std::size_t depth) {
  if (depth == plan.detectors.size()) return nullptr;
  const auto& det = plan.detectors[depth];
  std::vector<int> positions;
  for (int m : det.modes) {
    positions.push_back(static_cast<int>(std::find(live_modes.begin(), live_modes.end(), m) - live_modes.begin()));
  }
  detail::ModePartition part(FockBasis(static_cast<int>(live_modes.size()), cutoff), positions);
  std::vector<int> next_modes;
  for (int p : part.rest_modes()) next_modes.push_back(live_modes[static_cast<std::size_t>(p)]);

  auto node = std::make_unique<OutcomeNode>();
  const double total = std::max(rho.trace().real(), 0.0);
  for (const auto& e : det.povm) {
    ComplexMatrix branch = condition_raw(rho, part, e);
    const double p = std::max(branch.trace().real(), 0.0);
    node->conditional.push_back(total > 0.0 ? p / total : 0.0);
    node->children.push_back(p > 0.0 && !next_modes.empty()
                                 ? build_tree(branch, next_modes, cutoff, plan, depth + 1)
                                 : nullptr);
  }
  return node;
}

OutcomeRecord walk(const OutcomeNode* root, const MeasurementPlan& plan, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  OutcomeRecord record;
  record.seed = seed;
  record.probability = 1.0;
  const OutcomeNode* node = root;
  for (const auto& det : plan.detectors) {
    int result = 0;
    double p = det.povm.size() == 1 ? 1.0 : 0.0;
    if (node != nullptr && det.povm.size() > 1) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      double acc = 0.0;
      result = static_cast<int>(node->conditional.size()) - 1;
      for (std::size_t k = 0; k < node->conditional.size(); ++k) {
        acc += node->conditional[k];
        if (u < acc) {
          result = static_cast<int>(k);
          break;
        }
      }
      // Never land on a zero-probability outcome through rounding of acc.
      while (result > 0 && node->conditional[static_cast<std::size_t>(result)] == 0.0) --result;
      p = node->conditional[static_cast<std::size_t>(result)];
    }
    record.outcomes.emplace_back(det.name, result);
    record.probability *= p;
    node = node != nullptr ? node->children[static_cast<std::size_t>(result)].get() : nullptr;
  }
  return record;
}

}  // namespace

std::vector<OutcomeRecord> sample_trajectories(const DensityOp& rho, const MeasurementPlan& plan, std::uint64_t seed,
                                               std::size_t count) {
  validate(plan, rho.basis());
  std::vector<int> modes(static_cast<std::size_t>(rho.num_modes()));
  for (int m = 0; m < rho.num_modes(); ++m) modes[static_cast<std::size_t>(m)] = m;
  const auto root = build_tree(rho.matrix() / rho.trace(), modes, rho.cutoff(), plan, 0);
  std::vector<OutcomeRecord> records;
  records.reserve(count);
  for (std::size_t k = 0; k < count; ++k) records.push_back(walk(root.get(), plan, splitmix64(seed + k)));
  return records;
}

OutcomeRecord sample_trajectory(const DensityOp& rho, const MeasurementPlan& plan, std::uint64_t seed) {
  validate(plan, rho.basis());
  std::vector<int> modes(static_cast<std::size_t>(rho.num_modes()));
  for (int m = 0; m < rho.num_modes(); ++m) modes[static_cast<std::size_t>(m)] = m;
  const auto root = build_tree(rho.matrix() / rho.trace(), modes, rho.cutoff(), plan, 0);
  return walk(root.get(), plan, seed);
}

std::string to_json_line(const OutcomeRecord& record) {
  nlohmann::ordered_json j;
  j["seed"] = record.seed;
  j["outcomes"] = nlohmann::ordered_json::array();
  for (const auto& [name, result] : record.outcomes) {
    j["outcomes"].push_back({{"detector", name}, {"result", result}});
  }
  j["probability"] = record.probability;
  return j.dump();
}

}  // namespace catlink
