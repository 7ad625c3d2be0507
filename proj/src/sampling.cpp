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

#include "dsttomo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dsttomo {

namespace {

constexpr double kPi = std::numbers::pi;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RandomStream::bits(std::uint32_t lane) const {
  std::uint64_t h = mix64(seed_ ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ mix64(counter_));
  h = mix64(h ^ (static_cast<std::uint64_t>(lane) * 0xd1b54a32d192ed03ULL));
  return h;
}

double RandomStream::uniform(std::uint32_t lane) const {
  return (static_cast<double>(bits(lane) >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal(std::uint32_t lane) const {
  const double u1 = uniform(lane);
  const double u2 = uniform(lane + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Ket<double> sample_pure(const RandomStream& stream, std::uint32_t first_lane) {
  Ket<double> v(std::complex<double>(stream.normal(first_lane), stream.normal(first_lane + 2)),
                std::complex<double>(stream.normal(first_lane + 4), stream.normal(first_lane + 6)));
  return v / v.norm();
}

double bures_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double phi = std::acos(1.0 - 2.0 * x);
  return (phi + std::sin(phi) * std::cos(phi)) / kPi;
}

double bures_density(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double d = 1.0 - 2.0 * x;
  return 2.0 / kPi * d * d / std::sqrt(x * (1.0 - x));
}

double bures_icdf(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  // G(phi) = (phi + sin(phi) cos(phi)) / pi, G'(phi) = 2 cos^2(phi) / pi.
  const auto g = [](double phi) { return (phi + 0.5 * std::sin(2.0 * phi)) / kPi; };
  double lo = 0.0;
  double hi = kPi;
  double phi = std::clamp(kPi * u, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double r = g(phi) - u;
    if (r == 0.0) break;
    if (r > 0.0) {
      hi = phi;
    } else {
      lo = phi;
    }
    const double c = std::cos(phi);
    const double slope = 2.0 * c * c / kPi;
    double next = slope > 0.0 ? phi - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - phi) <= 4.0 * std::numeric_limits<double>::epsilon() * kPi ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon()) {
      phi = next;
      break;
    }
    phi = next;
  }
  return 0.5 * (1.0 - std::cos(phi));
}

Density<double> sample_bures(const RandomStream& stream) {
  const double x = bures_icdf(stream.uniform(0));
  const Ket<double> v0 = sample_pure(stream, 1);
  const Ket<double> v1(-std::conj(v0(1)), std::conj(v0(0)));
  return x * projector(v0) + (1.0 - x) * projector(v1);
}

MixedParam sample_mixed_param(const RandomStream& stream) {
  MixedParam param;
  param.x = bures_icdf(stream.uniform(0));
  param.delta = std::acos(std::clamp(2.0 * stream.uniform(1) - 1.0, -1.0, 1.0));
  param.eta0 = 2.0 * kPi * stream.uniform(2);
  param.eta1 = 2.0 * kPi * stream.uniform(3);
  return param;
}

Density<double> mixed_from_param(const MixedParam& param) {
  const double c = std::cos(0.5 * param.delta);
  const double s = std::sin(0.5 * param.delta);
  const Ket<double> r0(c, std::polar(s, param.eta0));
  const Ket<double> r1(s, std::polar(c, param.eta1));
  return param.x * projector(r0) + (1.0 - param.x) * projector(r1);
}

}  // namespace dsttomo
