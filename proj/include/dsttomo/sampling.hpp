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
 * Seeded random qubit ensembles.
 *
 * Randomness is counter based: every uniform variate is a hash of
 * (seed, counter, lane). A sample drawn at a given counter uses a fixed set
 * of lanes, so a sequence of samples is reproducible no matter how the
 * counter range is split across threads.
 */

#pragma once

#include <cstdint>

#include "dsttomo/qubit.hpp"

namespace dsttomo {

class RandomStream {
 public:
  constexpr RandomStream(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  /// Stream positioned `offset` samples further along.
  RandomStream at(std::uint64_t offset) const { return {seed_, counter_ + offset}; }

  /// Raw 64-bit output for (seed, counter, lane).
  std::uint64_t bits(std::uint32_t lane) const;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform(std::uint32_t lane) const;

  /// Standard normal from lanes (lane, lane + 1) by Box-Muller.
  double normal(std::uint32_t lane) const;

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

/// Haar-random pure state: two complex Gaussians, normalized. Uses lanes
/// [first_lane, first_lane + 8).
Ket<double> sample_pure(const RandomStream& stream, std::uint32_t first_lane = 0);

/// Bures eigenvalue CDF; with x = (1 - cos phi) / 2 it equals
/// (phi + sin phi cos phi) / pi.
double bures_cdf(double x);

/// Eigenvalue density (2/pi) (1 - 2x)^2 / sqrt(x (1 - x)).
double bures_density(double x);

/// Inverse of bures_cdf by guarded Newton iteration in phi.
double bures_icdf(double u);

/// Bures-random mixed state: eigenvalue by inverse CDF, eigenframe Haar.
Density<double> sample_bures(const RandomStream& stream);

/// Eigenvalue weight x, polar angle delta and the two independent phases of
/// the literal two-vector parametrization of a mixed state.
struct MixedParam {
  double x;
  double delta;
  double eta0;
  double eta1;
};

MixedParam sample_mixed_param(const RandomStream& stream);

/// x |r0><r0| + (1 - x) |r1><r1| with
/// |r0> = cos(d/2)|0> + e^{i eta0} sin(d/2)|1>,
/// |r1> = sin(d/2)|0> + e^{i eta1} cos(d/2)|1>.
/// The two vectors are orthogonal only when eta1 = eta0 + pi.
Density<double> mixed_from_param(const MixedParam& param);

}  // namespace dsttomo
