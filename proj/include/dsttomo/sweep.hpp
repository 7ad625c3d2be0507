// Copyright 2026 The dsttomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * State-space averages of the error bounds over random ensembles, the
 * lambda at which direct tomography stops beating the SIC-POVM, and the
 * lambda sweep behind the error-versus-strength figure.
 *
 * Plotted errors are square roots of mean squared errors.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsttomo/model.hpp"
#include "dsttomo/sampling.hpp"

namespace dsttomo {

enum class Ensemble { PureHaar, BuresMixed, PaperLiteralMixed };

/// Accepts "pure", "bures" and "paper-literal".
Ensemble parse_ensemble(std::string_view name);
std::string_view ensemble_name(Ensemble ensemble);

Density<double> sample_state(Ensemble ensemble, const RandomStream& stream);

struct MeanEstimate {
  double mean;
  double stderr_mean;
  std::uint64_t samples;
  /// Draws left out of the mean (singular SIC Fisher matrices).
  std::uint64_t excluded = 0;

  double root() const;
  /// Delta-method standard error of root().
  double root_stderr() const;
};

/// Mean of the closed-form bound over `samples` states; sample i is drawn
/// from stream.at(i).
MeanEstimate ensemble_average(const MeasurementStrength<double>& strength, Ensemble ensemble,
                              std::uint64_t samples, const RandomStream& stream,
                              unsigned workers = 1);

/// Mean of the SIC-POVM bound; draws with a singular Fisher matrix are
/// excluded and counted.
MeanEstimate sic_ensemble_average(Ensemble ensemble, std::uint64_t samples,
                                  const RandomStream& stream, unsigned workers = 1);

/// The SIC-POVM pure-state average bound; its root is 2.
inline constexpr double kSicPureAverage = 4.0;

/// Root of pure_average(lambda) = 4 by bisection on [0.5, 0.95].
double find_crossover(double tol);

struct Crossover {
  double lambda;
  double uncertainty;
  double sic_reference;
};

/// Lambda where the Monte Carlo DST average over `ensemble` meets that
/// ensemble's Monte Carlo SIC average. Same states at every lambda, so the
/// bisected function is smooth; `uncertainty` propagates the standard error
/// of the difference through the local slope.
Crossover find_mixed_crossover(Ensemble ensemble, std::uint64_t samples, double tol,
                               const RandomStream& stream, unsigned workers = 1);

struct SweepConfig {
  std::vector<double> lambda_grid;
  Ensemble ensemble = Ensemble::PureHaar;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string output_path;
  std::optional<std::string> svg_path;
  unsigned workers = 1;
};

/// Throws ValidationError on an empty, unsorted or out-of-range grid or zero
/// samples.
void validate(const SweepConfig& config);

/// "A:B:STEPS": STEPS equally spaced points from A to B inclusive.
std::vector<double> parse_grid(std::string_view spec);

struct SweepRow {
  double lambda;
  /// Analytic pure-state mean, only for the pure ensemble.
  std::optional<double> e2_closed;
  double e2_mc;
  double e2_mc_stderr;
  double e_min_mc;
  double e_sic_pure;
  double e_sic_mixed;
  std::uint64_t samples;
  std::uint64_t seed;
};

/// One row per grid point. Every lambda reuses the same sampled states; the
/// SIC mixed column is a Bures average over the same counter range.
std::vector<SweepRow> compute_sweep(const SweepConfig& config);

/// Header plus one line per row, 17 significant digits.
std::string format_csv(const std::vector<SweepRow>& rows);

/// Self-contained chart of e_min versus lambda.
std::string render_svg(const std::vector<SweepRow>& rows, Ensemble ensemble);

/// compute_sweep, then writes the CSV (and the SVG when requested).
/// Throws IoError when a file cannot be written.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

}  // namespace dsttomo
