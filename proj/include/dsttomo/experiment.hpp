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
 * Finite-shot simulation of the three-basis experiment.
 *
 * Each basis receives N successful post-selections. In basis t the count
 * n_0t is binomial with success probability p_0t / S (p_00 for t = 0).
 * The estimator takes frequencies, rebuilds S from the computational basis
 * and inverts linearly; its output is not projected onto physical states.
 */

#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "dsttomo/model.hpp"
#include "dsttomo/sampling.hpp"

namespace dsttomo {

struct CountRecord {
  /// n[t][k]; n[t][0] + n[t][1] == shots for every t.
  std::array<std::array<std::uint64_t, 2>, 3> n;
  std::uint64_t shots;
};

struct EmpiricalResult {
  double mean_e2;
  double stderr_e2;
  std::uint64_t runs;
  std::uint64_t shots;
};

/// Per-trial Fisher matrix estimated as the mean of s s^T / N over runs,
/// with s the score with respect to (p00, p01, p02).
struct EmpiricalFisher {
  Matrix3<double> fisher;
  Matrix3<double> stderr_fisher;
  std::uint64_t runs;
  std::uint64_t shots;
};

/// Binomial(n, p) variate by inversion of the CDF at the single uniform `u`.
/// The search starts at the mode, so the cost is O(sqrt(n p (1 - p))).
std::uint64_t binomial_inverse(std::uint64_t n, double p, double u);

/// Draws the three basis counts; uses lanes 0..2 of `stream`.
CountRecord simulate_counts(const Density<double>& rho,
                            const MeasurementStrength<double>& strength, std::uint64_t shots,
                            const RandomStream& stream);

/// Variant taking precomputed probabilities, for repeated runs.
CountRecord simulate_counts(const ProbabilitySet<double>& probs, std::uint64_t shots,
                            const RandomStream& stream);

/// Plug-in estimate: p00 = n00 / N, S = 1 - lambda + 2 lambda p00,
/// p_kt = S n_kt / N for t = 1, 2, then linear inversion.
std::pair<ProbabilitySet<double>, Density<double>> estimate_state(
    const CountRecord& counts, const MeasurementStrength<double>& strength);

/// Mean and standard error of Tr[(rho - rho_hat)^2] over `runs` independent
/// experiments; run r uses stream.at(r).
EmpiricalResult empirical_mse(const Density<double>& rho,
                              const MeasurementStrength<double>& strength, std::uint64_t shots,
                              std::uint64_t runs, const RandomStream& stream,
                              unsigned workers = 1);

EmpiricalFisher empirical_fisher(const Density<double>& rho,
                                 const MeasurementStrength<double>& strength,
                                 std::uint64_t shots, std::uint64_t runs,
                                 const RandomStream& stream, unsigned workers = 1);

/// Score vector d ln L / d(p00, p01, p02) of one count record, with
/// p10 = 1 - p00, p1t = S - p0t and the S^-2N normalization substituted.
Vector3<double> score(const CountRecord& counts, const ProbabilitySet<double>& probs,
                      const MeasurementStrength<double>& strength);

}  // namespace dsttomo
