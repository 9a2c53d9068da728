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

#include "catlink/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "catlink/detail/indexing.hpp"
#include "catlink/errors.hpp"

namespace catlink {

// ------------------------------------------------------------ DVQubit

DVQubit DVQubit::from_amplitudes(Complex c0, Complex c1) {
  const double norm = std::sqrt(std::norm(c0) + std::norm(c1));
  if (!(norm > 0.0)) throw std::invalid_argument("DV qubit amplitudes are both zero");
  c0 /= norm;
  c1 /= norm;
  const Complex phase = std::abs(c0) > 1e-12 ? std::polar(1.0, -std::arg(c0)) : std::polar(1.0, -std::arg(c1));
  c0 *= phase;
  c1 *= phase;
  if (std::abs(c0) > 1e-12) c0 = std::abs(c0);
  else c1 = std::abs(c1);
  return {c0, c1};
}

DVQubit DVQubit::dominant(const ComplexMatrix& block) {
  if (block.rows() != 2 || block.cols() != 2) throw std::invalid_argument("DV qubit block must be 2x2");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (block + block.adjoint()));
  const auto v = eig.eigenvectors().col(1);
  return from_amplitudes(v(0), v(1));
}

ComplexMatrix DVQubit::density() const {
  Eigen::Vector2cd v(c0, c1);
  return v * v.adjoint();
}

void validate(const DVQubit& qubit) {
  if (std::abs(std::norm(qubit.c0) + std::norm(qubit.c1) - 1.0) > 1e-12) {
    throw std::invalid_argument("DV qubit is not normalized");
  }
}

// ------------------------------------------------------------ config

namespace {

void validate_tap(const BeamSplitterSpec& tap, const char* name) {
  validate(tap);
  const double r = 1.0 - tap.transmissivity;
  if (!(r > 0.0 && r <= 0.5)) {
    throw std::invalid_argument(std::string(name) + " reflectivity must lie in (0, 0.5]");
  }
}

}  // namespace

void validate(const ProtocolConfig& config) {
  validate(config.r1);
  validate(config.r2);
  validate(config.r_s);
  validate(config.beta);
  validate_tap(config.tap_smss, "tap_smss");
  validate_tap(config.tap_bsm, "tap_bsm");
  validate(config.bsm_bs);
  validate(config.spm1);
  validate(config.spm2);
  validate(config.spm3);
  validate(config.homodyne);
  validate(config.loss.input);
  validate(config.loss.dv_arm);
  validate(config.loss.output);
  if (config.cutoff < 2) throw std::invalid_argument("cutoff must be >= 2");
  if (!(config.tail_tolerance > 0.0 && config.tail_tolerance < 1.0)) {
    throw std::invalid_argument("tail_tolerance must lie in (0, 1)");
  }
  if (config.alpha_target && *config.alpha_target == Complex(0.0)) {
    throw std::invalid_argument("alpha_target must be nonzero");
  }
}

// ------------------------------------------------------------ stage 1

DensityOp displaced_tmss(const SqueezerSpec& r1, const DisplacementSpec& beta, int cutoff, double tail_tolerance) {
  return DensityOp::pure(apply_displacement(two_mode_squeezed_vacuum(r1, cutoff, tail_tolerance), 0, beta));
}

DVPreparation prepare_dv_qubit(const SqueezerSpec& r1, const DisplacementSpec& beta, const ClickDetectorSpec& spm1,
                               int cutoff, double tail_tolerance) {
  const FockVector psi = apply_displacement(two_mode_squeezed_vacuum(r1, cutoff, tail_tolerance), 0, beta);
  HeraldOutcome herald = condition(psi, 0, click_povm(spm1, cutoff).click, "dv_herald");
  ComplexMatrix block = herald.post_state.matrix().topLeftCorner(2, 2);
  const double weight = block.trace().real();
  if (!(weight > 0.0)) throw NullStateError();
  block /= weight;
  const DVQubit qubit = DVQubit::dominant(block);
  const double leakage = std::clamp(1.0 - weight / herald.post_state.trace(), 0.0, 1.0);
  return {std::move(herald), qubit, std::move(block), leakage};
}

std::vector<DisplacementSpec> suite_displacements(const SqueezerSpec& r1) {
  const double l = std::tanh(r1.r);
  const Complex i(0.0, 1.0);
  return {{0.0}, {l}, {-l}, {i * l}, {-i * l}, {1.0}};
}

std::vector<SuiteInput> six_qubit_suite(const SqueezerSpec& r1, const ClickDetectorSpec& spm1, int cutoff,
                                        double tail_tolerance) {
  std::vector<SuiteInput> suite;
  for (const auto& beta : suite_displacements(r1)) {
    suite.push_back({beta, prepare_dv_qubit(r1, beta, spm1, cutoff, tail_tolerance)});
  }
  return suite;
}

// ------------------------------------------------------------ stage 2

HeraldOutcome photon_subtracted_smss(const SqueezerSpec& r_s, const BeamSplitterSpec& tap, const ClickDetectorSpec& spm,
                                     int cutoff, double tail_tolerance) {
  validate_tap(tap, "tap");
  FockVector psi = tensor(squeezed_vacuum(r_s, cutoff, tail_tolerance), FockVector::vacuum(1, cutoff));
  psi = apply_beam_splitter(psi, 0, 1, tap);
  return condition(psi, 1, click_povm(spm, cutoff).click, "subtraction_herald");
}

FockVector hybrid_source_state(const SqueezerSpec& r2, const SqueezerSpec& r_s, const BeamSplitterSpec& tap_smss,
                               int cutoff, double tail_tolerance) {
  validate_tap(tap_smss, "tap_smss");
  FockVector psi = tensor(tensor(two_mode_squeezed_vacuum(r2, cutoff, tail_tolerance),
                                 squeezed_vacuum(r_s, cutoff, tail_tolerance)),
                          FockVector::vacuum(1, cutoff));
  psi = apply_beam_splitter(psi, 2, 3, tap_smss);
  return apply_beam_splitter(psi, 1, 3, BeamSplitterSpec{0.5, 0.0});
}

HeraldOutcome generate_hybrid_entanglement(const SqueezerSpec& r2, const SqueezerSpec& r_s,
                                           const BeamSplitterSpec& tap_smss, const ClickDetectorSpec& spm2, int cutoff,
                                           double tail_tolerance) {
  const FockVector psi = hybrid_source_state(r2, r_s, tap_smss, cutoff, tail_tolerance);
  const ComplexMatrix element = Eigen::kroneckerProduct(ComplexMatrix::Identity(cutoff + 1, cutoff + 1),
                                                        click_povm(spm2, cutoff).click)
                                    .eval();
  const int measured[] = {1, 3};
  return condition(psi, std::span<const int>(measured), element, "hybrid_herald");
}

FockVector hybrid_target(Complex alpha, int cutoff, double tail_tolerance) {
  const CatBasis cats(alpha, cutoff, tail_tolerance);
  const FockVector zero = FockVector::number_state(cutoff, {0});
  const FockVector one = FockVector::number_state(cutoff, {1});
  ComplexVector amps = tensor(zero, cats.minus()).amplitudes() + tensor(one, cats.plus()).amplitudes();
  amps /= amps.norm();
  return {FockBasis(2, cutoff), std::move(amps)};
}

DensityOp analytic_hybrid_resource(Complex alpha, int cutoff, double tail_tolerance) {
  return DensityOp::pure(hybrid_target(alpha, cutoff, tail_tolerance));
}

namespace {

template <class Score>
AlphaMatch alpha_grid(Score&& score) {
  AlphaMatch best{0.0, -1.0};
  for (int k = 1; k <= 200; ++k) {
    const double alpha = 0.01 * k;
    double f = 0.0;
    try {
      f = score(alpha);
    } catch (const TruncationError&) {
      continue;
    }
    if (f > best.fidelity) best = {alpha, f};
  }
  if (best.fidelity < 0.0) throw TruncationError("no cat amplitude on the alpha grid fits the cutoff", 0);
  return best;
}

}  // namespace

AlphaMatch match_cat_alpha(const DensityOp& rho, Parity parity, double tail_tolerance) {
  if (rho.num_modes() != 1) throw std::invalid_argument("alpha match needs a single-mode state");
  return alpha_grid([&](double alpha) { return fidelity(rho, cat_state(alpha, parity, rho.cutoff(), tail_tolerance)); });
}

AlphaMatch match_hybrid_alpha(const DensityOp& rho, double tail_tolerance) {
  if (rho.num_modes() != 2) throw std::invalid_argument("hybrid alpha match needs a two-mode state");
  return alpha_grid([&](double alpha) { return fidelity(rho, hybrid_target(alpha, rho.cutoff(), tail_tolerance)); });
}

// ------------------------------------------------------------ stage 3

BsmSettings bsm_settings(const ProtocolConfig& config) {
  return {config.bsm_bs, config.tap_bsm, config.spm3, config.homodyne, config.bsm_herald, config.condition_other_port};
}

ComplexMatrix bsm_effective_element(const BsmSettings& settings, int cutoff) {
  validate(settings.mixer);
  const int levels = cutoff + 1;
  const auto pair_dim = static_cast<Eigen::Index>(levels) * levels;
  const BeamSplitterBlocks mixer(settings.mixer, cutoff);
  const ComplexMatrix vacuum_projector = photon_number_projector(0, cutoff);
  const ComplexMatrix other = settings.condition_other_port ? vacuum_projector
                                                            : ComplexMatrix::Identity(levels, levels);

  if (settings.herald == BsmHerald::ideal_projector) {
    const FockBasis basis(2, cutoff);
    ComplexMatrix w = ComplexMatrix::Identity(pair_dim, pair_dim);
    for (Eigen::Index k = 0; k < pair_dim; ++k) {
      mixer.apply(basis, 0, 1, std::span<Complex>(w.col(k).data(), static_cast<std::size_t>(pair_dim)));
    }
    const ComplexMatrix e = Eigen::kroneckerProduct(other, photon_number_projector(1, cutoff)).eval();
    ComplexMatrix m = w.adjoint() * e * w;
    return (m + m.adjoint()) * 0.5;
  }

  validate_tap(settings.tap, "tap_bsm");
  validate(settings.spm3);
  const BeamSplitterBlocks tap(settings.tap, cutoff);
  const ComplexMatrix window = homodyne_window_povm(settings.homodyne, cutoff);
  const ComplexMatrix click = click_povm(settings.spm3, cutoff).click;
  // Modes: 0 other port, 1 herald port (then through arm), 2 tap arm.
  const FockBasis basis(3, cutoff);
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  ComplexMatrix w = ComplexMatrix::Zero(dim, pair_dim);
  for (Eigen::Index k = 0; k < pair_dim; ++k) w(k * levels, k) = 1.0;
  for (Eigen::Index k = 0; k < pair_dim; ++k) {
    std::span<Complex> col(w.col(k).data(), static_cast<std::size_t>(dim));
    mixer.apply(basis, 0, 1, col);
    tap.apply(basis, 1, 2, col);
  }
  ComplexMatrix ew = w;
  for (Eigen::Index k = 0; k < pair_dim; ++k) {
    std::span<Complex> col(ew.col(k).data(), static_cast<std::size_t>(dim));
    detail::apply_single_mode(basis, 0, other, col);
    detail::apply_single_mode(basis, 1, window, col);
    detail::apply_single_mode(basis, 2, click, col);
  }
  ComplexMatrix m = w.adjoint() * ew;
  return (m + m.adjoint()) * 0.5;
}

HeraldOutcome bell_state_measurement(const DensityOp& joint, int input_mode, int dv_mode, const BsmSettings& settings) {
  const int measured[] = {input_mode, dv_mode};
  return condition(joint, std::span<const int>(measured), bsm_effective_element(settings, joint.cutoff()),
                   "bsm_herald");
}

HeraldOutcome bell_state_measurement(const DensityOp& input, const DensityOp& resource, const ComplexMatrix& element) {
  if (input.num_modes() != 1 || resource.num_modes() != 2) {
    throw std::invalid_argument("BSM expects a single-mode input and a two-mode resource");
  }
  if (input.cutoff() != resource.cutoff()) throw std::invalid_argument("incompatible bases");
  const int levels = input.cutoff() + 1;
  if (element.rows() != static_cast<Eigen::Index>(levels) * levels) {
    throw std::invalid_argument("BSM element dimension does not match the cutoff");
  }
  // Mt(a, a') = sum_ij M((i, a), (j, a')) rho_in(j, i)
  ComplexMatrix reduced = ComplexMatrix::Zero(levels, levels);
  const auto& rho = input.matrix();
  for (int i = 0; i < levels; ++i) {
    for (int j = 0; j < levels; ++j) {
      const Complex weight = rho(j, i);
      if (weight == Complex(0.0)) continue;
      reduced += weight * element.block(static_cast<Eigen::Index>(i) * levels, static_cast<Eigen::Index>(j) * levels,
                                        levels, levels);
    }
  }
  reduced = (reduced + reduced.adjoint()) * 0.5;
  return condition(resource, 0, reduced, "bsm_herald");
}

HeraldOutcome bell_state_measurement(const DensityOp& input, const DensityOp& resource, const BsmSettings& settings) {
  return bell_state_measurement(input, resource, bsm_effective_element(settings, input.cutoff()));
}

// ------------------------------------------------------------ analysis

CatQubitState extract_cat_qubit(const DensityOp& rho, const CatBasis& basis) {
  if (rho.num_modes() != 1) throw std::invalid_argument("cat extraction needs a single-mode state");
  if (rho.cutoff() != basis.cutoff()) throw std::invalid_argument("incompatible bases");
  const ComplexMatrix& v = basis.isometry();
  ComplexMatrix block = v.adjoint() * rho.matrix() * v / rho.trace();
  block = (block + block.adjoint()) * 0.5;
  const double leakage = std::clamp(1.0 - block.trace().real(), 0.0, 1.0);
  return {std::move(block), leakage};
}

CatQubitState extract_cat_qubit(const DensityOp& rho, Complex alpha, double tail_tolerance) {
  if (alpha == Complex(0.0)) throw std::invalid_argument("cat amplitude must be nonzero");
  return extract_cat_qubit(rho, CatBasis(alpha, rho.cutoff(), tail_tolerance));
}

CatQubitState teleport_convention(const DVQubit& input) {
  validate(input);
  return {input.density(), 0.0};
}

FockVector teleport_target(const DVQubit& input, const CatBasis& basis) {
  validate(input);
  ComplexVector amps = input.c0 * basis.plus().amplitudes() + input.c1 * basis.minus().amplitudes();
  amps /= amps.norm();
  return {FockBasis(1, basis.cutoff()), std::move(amps)};
}

double state_fidelity(const CatQubitState& output, const DVQubit& input) {
  const Eigen::Vector2cd t(input.c0, input.c1);
  return std::clamp((t.adjoint() * output.qubit_block * t)(0, 0).real(), 0.0, 1.0);
}

namespace {

std::string population_warning(const std::string& label, int mode, int cutoff, double population) {
  std::ostringstream os;
  os << label << ": mode " << mode << " population at level " << cutoff << " is " << population;
  return os.str();
}

}  // namespace

std::vector<std::string> truncation_warnings(const DensityOp& rho, const std::string& label, double tolerance) {
  std::vector<std::string> out;
  for (int m = 0; m < rho.num_modes(); ++m) {
    const double top = photon_distribution(rho, m).back() / rho.trace();
    if (top > tolerance) out.push_back(population_warning(label, m, rho.cutoff(), top));
  }
  return out;
}

std::vector<std::string> truncation_warnings(const FockVector& psi, const std::string& label, double tolerance) {
  std::vector<std::string> out;
  for (int m = 0; m < psi.num_modes(); ++m) {
    const double top = photon_distribution(psi, m).back() / psi.squared_norm();
    if (top > tolerance) out.push_back(population_warning(label, m, psi.cutoff(), top));
  }
  return out;
}

// ------------------------------------------------------------ converter

struct Converter::Parts {
  ProtocolConfig config;
  Complex alpha;
  CatBasis cat_basis;
  DensityOp resource;
  double resource_probability;
  double hybrid_fidelity;
  ComplexMatrix bsm_element;
  std::vector<std::string> warnings;
};

Converter::Converter(ProtocolConfig config) : Converter(build(std::move(config))) {}

Converter::Converter(Parts&& parts)
    : config_(std::move(parts.config)),
      alpha_(parts.alpha),
      cat_basis_(std::move(parts.cat_basis)),
      resource_(std::move(parts.resource)),
      resource_probability_(parts.resource_probability),
      hybrid_fidelity_(parts.hybrid_fidelity),
      bsm_element_(std::move(parts.bsm_element)),
      warnings_(std::move(parts.warnings)) {}

Converter::Parts Converter::build(ProtocolConfig config) {
  validate(config);
  const int n = config.cutoff;
  const double tol = config.tail_tolerance;
  std::vector<std::string> warnings;

  std::optional<HeraldOutcome> generated;
  if (config.resource == ResourceKind::generated || !config.alpha_target) {
    const FockVector source = hybrid_source_state(config.r2, config.r_s, config.tap_smss, n, tol);
    auto w = truncation_warnings(source, "hybrid_source", tol);
    warnings.insert(warnings.end(), w.begin(), w.end());
    const ComplexMatrix element =
        Eigen::kroneckerProduct(ComplexMatrix::Identity(n + 1, n + 1), click_povm(config.spm2, n).click).eval();
    const int measured[] = {1, 3};
    generated = condition(source, std::span<const int>(measured), element, "hybrid_herald");
  }
  const Complex alpha = config.alpha_target ? *config.alpha_target : Complex(match_hybrid_alpha(generated->post_state, tol).alpha);
  CatBasis cats(alpha, n, tol);
  DensityOp resource =
      config.resource == ResourceKind::generated ? generated->post_state : analytic_hybrid_resource(alpha, n, tol);
  const double probability = config.resource == ResourceKind::generated ? generated->probability : 1.0;
  const double hybrid_fid = fidelity(resource, hybrid_target(alpha, n, tol));
  resource = apply_loss(resource, 0, config.loss.dv_arm);
  ComplexMatrix element = bsm_effective_element(bsm_settings(config), n);
  return {std::move(config), alpha,       std::move(cats),    std::move(resource), probability,
          hybrid_fid,        std::move(element), std::move(warnings)};
}

DensityOp Converter::input_state(const DVPreparation& prep) const {
  return apply_loss(prep.herald.post_state, 0, config_.loss.input);
}

RunReport Converter::run(const DisplacementSpec& beta) const {
  return run(beta, prepare_dv_qubit(config_.r1, beta, config_.spm1, config_.cutoff, config_.tail_tolerance));
}

RunReport Converter::run(const DisplacementSpec& beta, const DVPreparation& prep) const {
  const double tol = config_.tail_tolerance;
  RunReport report;
  report.truncation_warnings = warnings_;
  auto add = [&](std::vector<std::string> w) {
    report.truncation_warnings.insert(report.truncation_warnings.end(), w.begin(), w.end());
  };
  add(truncation_warnings(displaced_tmss(config_.r1, beta, config_.cutoff, tol), "dv_source", tol));
  add(truncation_warnings(prep.herald.post_state, "dv_qubit", tol));

  const HeraldOutcome bsm = bell_state_measurement(input_state(prep), resource_, bsm_element_);
  const DensityOp output = apply_loss(bsm.post_state, 0, config_.loss.output);
  add(truncation_warnings(output, "output", tol));

  report.stage_probabilities = {{"dv_herald", prep.herald.probability},
                                {"hybrid_herald", resource_probability_},
                                {"bsm_herald", bsm.probability}};
  report.success_probability = prep.herald.probability * resource_probability_ * bsm.probability;
  report.output = extract_cat_qubit(output, cat_basis_);
  report.input = prep.qubit;
  report.input_block = prep.block;
  report.input_leakage = prep.leakage;
  report.state_fidelity = state_fidelity(report.output, prep.qubit);
  report.beta = beta.beta;
  report.alpha = alpha_;
  report.hybrid_fidelity = hybrid_fidelity_;
  return report;
}

RunReport run_converter(const ProtocolConfig& config, const DisplacementSpec& input_beta) {
  return Converter(config).run(input_beta);
}

SuiteReport run_suite(const Converter& converter) {
  const auto& config = converter.config();
  SuiteReport suite;
  suite.alpha = converter.alpha();
  suite.hybrid_fidelity = converter.hybrid_fidelity();
  std::vector<TomographyPair> pairs;
  std::vector<double> fidelities;
  for (const auto& input : six_qubit_suite(config.r1, config.spm1, config.cutoff, config.tail_tolerance)) {
    RunReport run = converter.run(input.beta, input.preparation);
    pairs.push_back({input.preparation.block, run.output.qubit_block});
    fidelities.push_back(run.state_fidelity);
    suite.runs.push_back(std::move(run));
  }
  suite.process = process_tomography(pairs);
  suite.thresholds = classical_thresholds(fidelities, suite.process);
  return suite;
}

SuiteReport run_suite(const ProtocolConfig& config) { return run_suite(Converter(config)); }

// ------------------------------------------------------------ Monte Carlo

double HeraldCheck::sigma() const {
  if (samples == 0) return 0.0;
  return std::sqrt(exact * (1.0 - exact) / static_cast<double>(samples));
}

bool HeraldCheck::agrees(double k) const { return std::abs(frequency() - exact) <= k * sigma(); }

namespace {

HeraldCheck sample_stage(const std::string& stage, const DensityOp& rho, const std::vector<int>& modes,
                         const ComplexMatrix& herald, double exact, std::size_t samples, std::uint64_t seed,
                         std::vector<OutcomeRecord>* records) {
  const auto dim = herald.rows();
  MeasurementPlan plan{{DetectorPlan{stage, modes, {ComplexMatrix::Identity(dim, dim) - herald, herald}}}};
  HeraldCheck check{stage, exact, samples, 0};
  auto sampled = sample_trajectories(rho, plan, seed, samples);
  for (const auto& record : sampled) {
    if (record.outcomes.front().second == 1) ++check.hits;
  }
  if (records != nullptr) records->insert(records->end(), sampled.begin(), sampled.end());
  return check;
}

}  // namespace

std::vector<HeraldCheck> monte_carlo_herald_check(const ProtocolConfig& config, const DisplacementSpec& beta,
                                                  std::size_t samples, std::uint64_t seed,
                                                  std::vector<OutcomeRecord>* records) {
  const Converter converter(config);
  const int n = config.cutoff;
  const double tol = config.tail_tolerance;
  std::vector<HeraldCheck> checks;

  const DVPreparation prep = prepare_dv_qubit(config.r1, beta, config.spm1, n, tol);
  checks.push_back(sample_stage("dv_herald", displaced_tmss(config.r1, beta, n, tol), {0},
                                click_povm(config.spm1, n).click, prep.herald.probability, samples,
                                splitmix64(seed), records));

  if (config.resource == ResourceKind::generated) {
    const FockVector source = hybrid_source_state(config.r2, config.r_s, config.tap_smss, n, tol);
    checks.push_back(sample_stage("hybrid_herald", reduced_density(source, {3}), {0},
                                  click_povm(config.spm2, n).click, converter.resource_probability(), samples,
                                  splitmix64(seed + 1), records));
  }

  const DensityOp input = converter.input_state(prep);
  const HeraldOutcome bsm = bell_state_measurement(input, converter.resource(), converter.bsm_element());
  const DensityOp pair = tensor(input, partial_trace(converter.resource(), {0}));
  checks.push_back(sample_stage("bsm_herald", pair, {0, 1}, converter.bsm_element(), bsm.probability, samples,
                                splitmix64(seed + 2), records));
  return checks;
}

}  // namespace catlink
