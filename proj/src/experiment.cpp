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

#include "dsttomo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dsttomo/crb.hpp"
#include "dsttomo/reduce.hpp"

namespace dsttomo {

std::uint64_t binomial_inverse(std::uint64_t n, double p, double u) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double q = 1.0 - p;
  const double nd = static_cast<double>(n);
  const auto mode = std::min<std::uint64_t>(
      n, static_cast<std::uint64_t>(std::floor((nd + 1.0) * p)));
  const double md = static_cast<double>(mode);
  const double log_mode = std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                          std::lgamma(nd - md + 1.0) + md * std::log(p) +
                          (nd - md) * std::log(q);
  const double p_mode = std::exp(log_mode);

  // Lower tail pmf(mode), pmf(mode - 1), ... until negligible.
  std::vector<double> lower{p_mode};
  {
    double term = p_mode;
    for (std::uint64_t k = mode; k > 0; --k) {
      term *= static_cast<double>(k) / (nd - static_cast<double>(k) + 1.0) * (q / p);
      if (term < p_mode * 1e-20) break;
      lower.push_back(term);
    }
  }
  double cdf_mode = 0.0;
  for (auto it = lower.rbegin(); it != lower.rend(); ++it) cdf_mode += *it;

  if (u <= cdf_mode) {
    // Smallest k <= mode with F(k) >= u.
    std::uint64_t k = mode;
    double c = cdf_mode;
    for (std::size_t i = 0; i + 1 < lower.size(); ++i) {
      const double below = c - lower[i];
      if (below < u) break;
      c = below;
      --k;
    }
    return k;
  }

  std::uint64_t k = mode;
  double c = cdf_mode;
  double term = p_mode;
  while (c < u && k < n) {
    term *= (nd - static_cast<double>(k)) / (static_cast<double>(k) + 1.0) * (p / q);
    ++k;
    c += term;
    if (term < p_mode * 1e-20) break;
  }
  return k;
}

CountRecord simulate_counts(const ProbabilitySet<double>& probs, std::uint64_t shots,
                            const RandomStream& stream) {
  CountRecord rec{};
  rec.shots = shots;
  for (int t = 0; t < 3; ++t) {
    const double success = t == 0 ? probs(0, 0) : probs(t, 0) / probs.s;
    const std::uint64_t n0 =
        binomial_inverse(shots, std::clamp(success, 0.0, 1.0), stream.uniform(t));
    rec.n[t] = {n0, shots - n0};
  }
  return rec;
}

CountRecord simulate_counts(const Density<double>& rho,
                            const MeasurementStrength<double>& strength, std::uint64_t shots,
                            const RandomStream& stream) {
  if (shots == 0) throw ValidationError("shots must be at least 1");
  return simulate_counts(probabilities(rho, strength), shots, stream);
}

std::pair<ProbabilitySet<double>, Density<double>> estimate_state(
    const CountRecord& counts, const MeasurementStrength<double>& strength) {
  detail::check_lambda_open(strength.lambda());
  if (counts.shots == 0) throw ValidationError("count record has zero shots");
  const double n = static_cast<double>(counts.shots);
  for (const auto& basis : counts.n) {
    if (basis[0] + basis[1] != counts.shots) {
      throw ValidationError("basis counts do not add up to the shot number");
    }
  }
  ProbabilitySet<double> est;
  est.p(0, 0) = static_cast<double>(counts.n[0][0]) / n;
  est.p(0, 1) = static_cast<double>(counts.n[0][1]) / n;
  est.s = s_value(est.p(0, 0), strength);
  for (int t = 1; t <= 2; ++t) {
    for (int k = 0; k < 2; ++k) est.p(t, k) = est.s * static_cast<double>(counts.n[t][k]) / n;
  }
  return {est, reconstruct(est, strength)};
}

EmpiricalResult empirical_mse(const Density<double>& rho,
                              const MeasurementStrength<double>& strength, std::uint64_t shots,
                              std::uint64_t runs, const RandomStream& stream,
                              unsigned workers) {
  if (shots == 0) throw ValidationError("shots must be at least 1");
  if (runs < 2) throw ValidationError("runs must be at least 2");
  const ProbabilitySet<double> probs = probabilities(rho, strength);
  using Acc = Eigen::Array2d;
  const Acc sums = block_reduce<Acc>(runs, workers, Acc::Zero(), [&](std::size_t r) {
    const CountRecord counts = simulate_counts(probs, shots, stream.at(r));
    const double e2 = hs_distance_sq(rho, estimate_state(counts, strength).second);
    return Acc(e2, e2 * e2);
  });
  const double m = static_cast<double>(runs);
  const double mean = sums(0) / m;
  const double var = std::max(0.0, (sums(1) - m * mean * mean) / (m - 1.0));
  return {mean, std::sqrt(var / m), runs, shots};
}

Vector3<double> score(const CountRecord& counts, const ProbabilitySet<double>& probs,
                      const MeasurementStrength<double>& strength) {
  const double l = strength.lambda();
  const double n = static_cast<double>(counts.shots);
  const auto count = [&](int t, int k) { return static_cast<double>(counts.n[t][k]); };
  Vector3<double> s;
  s(0) = count(0, 0) / probs(0, 0) - count(0, 1) / probs(0, 1) - 4.0 * l * n / probs.s;
  for (int t = 1; t <= 2; ++t) {
    s(0) += 2.0 * l * count(t, 1) / probs(t, 1);
    s(t) = count(t, 0) / probs(t, 0) - count(t, 1) / probs(t, 1);
  }
  return s;
}

EmpiricalFisher empirical_fisher(const Density<double>& rho,
                                 const MeasurementStrength<double>& strength,
                                 std::uint64_t shots, std::uint64_t runs,
                                 const RandomStream& stream, unsigned workers) {
  if (shots == 0) throw ValidationError("shots must be at least 1");
  if (runs < 2) throw ValidationError("runs must be at least 2");
  const ProbabilitySet<double> probs = probabilities(rho, strength);
  constexpr double kInterior = 1e-6;
  if ((probs.p.array() < kInterior).any()) {
    throw SingularFisher("empirical Fisher needs all probabilities above 1e-6");
  }
  const double n = static_cast<double>(shots);
  using Acc = Eigen::Array<double, 18, 1>;
  const Acc sums = block_reduce<Acc>(runs, workers, Acc::Zero(), [&](std::size_t r) {
    const Vector3<double> s = score(simulate_counts(probs, shots, stream.at(r)), probs, strength);
    const Matrix3<double> outer = s * s.transpose() / n;
    Acc acc;
    acc.head<9>() = outer.reshaped().array();
    acc.tail<9>() = outer.reshaped().array().square();
    return acc;
  });
  const double m = static_cast<double>(runs);
  EmpiricalFisher out;
  out.runs = runs;
  out.shots = shots;
  for (int i = 0; i < 9; ++i) {
    const double mean = sums(i) / m;
    const double var = std::max(0.0, (sums(9 + i) - m * mean * mean) / (m - 1.0));
    out.fisher.reshaped()(i) = mean;
    out.stderr_fisher.reshaped()(i) = std::sqrt(var / m);
  }
  return out;
}

}  // namespace dsttomo
