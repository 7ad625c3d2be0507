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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. An optional argument names the dsttomo
// CLI binary; with it, the determinism criterion drives the real command.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dsttomo/crb.hpp"
#include "dsttomo/experiment.hpp"
#include "dsttomo/model.hpp"
#include "dsttomo/sampling.hpp"
#include "dsttomo/sweep.hpp"
#include "oracles.hpp"

using namespace dsttomo;
using Strength = MeasurementStrength<double>;

namespace {

constexpr std::uint64_t kSeed = 20260101;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

const Density<double> kMixed = 0.5 * Density<double>::Identity();

Outcome round_trip() {
  const RandomStream stream(kSeed);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Density<double> rho = sample_bures(stream.at(i));
    for (double l : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99}) {
      const auto s = Strength::from_lambda(l);
      worst = std::max(worst, hs_distance_sq(rho, reconstruct(probabilities(rho, s), s)));
    }
  }
  return {worst < 1e-12, fmt("worst HS distance %.3g over 11000 trials", worst)};
}

Outcome oracle_bases() {
  double worst = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double theta = j * kPi / 400.0;
    const auto from_oracle = coupling_oracle(theta);
    const auto closed = effective_states(Strength::from_theta(theta));
    for (int t = 0; t < 3; ++t)
      for (int k = 0; k < 2; ++k)
        worst = std::max(worst, (from_oracle(t, k) - closed(t, k)).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-12, fmt("max amplitude deviation %.3g on theta = j*pi/400, j = 1..100", worst)};
}

Outcome closed_vs_inverse() {
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  int trials = 0;
  for (double l : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99}) {
    const auto s = Strength::from_lambda(l);
    const Matrix3<double> q = q_matrix(s);
    for (int i = 0; i < 10000; ++i) {
      const auto p = probabilities<double>(oracle::random_interior_density(rng), s);
      const double closed = crb_closed(p, s).bound;
      // Tr(Q F^-1) with Eigen's LU inverse as the reference.
      const double reference = (q * fisher_matrix(p, s).partialPivLu().inverse()).trace();
      worst = std::max(worst, std::abs(closed - reference) / reference);
      ++trials;
    }
  }
  return {worst < 1e-9, fmt("max relative error %.3g over %d states", worst, trials)};
}

Outcome pure_average_checks() {
  double worst_quad = 0.0;
  for (int i = 1; i <= 19; ++i) {
    const auto s = Strength::from_lambda(0.05 * i);
    const double quad = oracle::simpson([&](double x) { return pure_crb(x, s); }, 0.0, 1.0);
    worst_quad = std::max(worst_quad, std::abs(quad - pure_average(s)));
  }
  const double at0 = pure_average(Strength::from_lambda(0.0));
  const double at05 = pure_average(Strength::from_lambda(0.5));
  const double l = 0.999;
  const double scaled = (1 - l * l) * pure_average(Strength::from_lambda(l));
  const bool ok = worst_quad < 1e-8 && at0 == 1.0 && std::abs(at05 - 1.51944) <= 1e-4 &&
                  std::abs(scaled - 4.0 / 3.0) <= 0.01 * 4.0 / 3.0;
  return {ok, fmt("quadrature gap %.2g; avg(0) = %.17g; avg(0.5) = %.6f; "
                  "(1-l^2)avg(0.999) = %.5f",
                  worst_quad, at0, at05, scaled)};
}

Outcome pure_monte_carlo() {
  const RandomStream stream(kSeed);
  double worst_sigma = 0.0;
  int points = 0;
  for (int i = 0; i <= 19; ++i) {
    const auto s = Strength::from_lambda(0.05 * i);
    const MeanEstimate mc = ensemble_average(s, Ensemble::PureHaar, 100000, stream, workers());
    const double gap = std::abs(mc.root() - std::sqrt(pure_average(s)));
    // At lambda = 0 every sample is exactly 1 and the standard error vanishes.
    if (gap > 1e-12) worst_sigma = std::max(worst_sigma, gap / mc.root_stderr());
    ++points;
  }
  return {worst_sigma < 3.0,
          fmt("largest deviation %.2f standard errors over %d grid points", worst_sigma, points)};
}

Outcome mixed_monte_carlo() {
  const MeanEstimate mc = ensemble_average(Strength::from_lambda(0.0), Ensemble::BuresMixed,
                                           100000, RandomStream(kSeed), workers());
  return {std::abs(mc.root() - 1.12) <= 0.02,
          fmt("sqrt(mean) = %.4f +- %.4f (target 1.12 +- 0.02); un-rooted mean = %.4f",
              mc.root(), mc.root_stderr(), mc.mean)};
}

Outcome sic_baseline() {
  const RandomStream stream(kSeed);
  const MeanEstimate pure = sic_ensemble_average(Ensemble::PureHaar, 100000, stream, workers());
  const MeanEstimate mixed = sic_ensemble_average(Ensemble::BuresMixed, 100000, stream, workers());
  const double centre = sic_crb(kMixed);
  const bool ok = std::abs(pure.root() - 2.0) <= 0.01 && std::abs(mixed.root() - 2.04) <= 0.02 &&
                  std::abs(centre - 4.5) <= 1e-10;
  return {ok, fmt("pure sqrt(mean) = %.4f (excluded %llu); Bures sqrt(mean) = %.4f; "
                  "sic_crb(I/2) = %.15g",
                  pure.root(), static_cast<unsigned long long>(pure.excluded), mixed.root(),
                  centre)};
}

Outcome crossover() {
  const double root = find_crossover(1e-6);
  return {root >= 0.815 && root <= 0.825, fmt("pure_average(lambda) = 4 at lambda = %.6f", root)};
}

Outcome saturation() {
  std::string detail;
  bool ok = true;
  for (double l : {0.0, 0.5}) {
    const auto s = Strength::from_lambda(l);
    const double bound = crb_closed(probabilities(kMixed, s), s).bound;
    const EmpiricalResult r = empirical_mse(kMixed, s, 10000, 1000, RandomStream(kSeed), workers());
    const double scaled = 10000.0 * r.mean_e2;
    ok = ok && std::abs(scaled - bound) <= 0.05 * bound;
    detail += fmt("%slambda=%.1f: N*MSE = %.4f vs bound %.4f (%+.1f%%)", detail.empty() ? "" : "; ",
                  l, scaled, bound, 100.0 * (scaled / bound - 1.0));
  }
  return {ok, detail};
}

Outcome fisher_oracle() {
  const auto s = Strength::from_lambda(0.5);
  const EmpiricalFisher f = empirical_fisher(kMixed, s, 1, 1000000, RandomStream(kSeed), workers());
  Matrix3<double> expected;
  expected << 6, -2, -2, -2, 4, 0, -2, 0, 4;
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double gap = std::abs(f.fisher(i, j) - expected(i, j));
      // Entries with zero sampling variance must match to rounding.
      ok = ok && gap <= 3.0 * f.stderr_fisher(i, j) + 1e-12;
      if (f.stderr_fisher(i, j) > 0) worst = std::max(worst, gap / f.stderr_fisher(i, j));
    }
  return {ok, fmt("largest entry deviation %.2f standard errors; F = [[%.3f %.3f %.3f] [%.3f %.3f "
                  "%.3f] [%.3f %.3f %.3f]]",
                  worst, f.fisher(0, 0), f.fisher(0, 1), f.fisher(0, 2), f.fisher(1, 0),
                  f.fisher(1, 1), f.fisher(1, 2), f.fisher(2, 0), f.fisher(2, 1), f.fisher(2, 2))};
}

Outcome samplers() {
  constexpr int n = 100000;
  const RandomStream stream(kSeed);
  // Larger eigenvalue of a Bures draw: CDF 2F(y) - 1 on [1/2, 1].
  std::vector<double> ys(n);
  for (int i = 0; i < n; ++i) ys[i] = oracle::eigenvalues(sample_bures(stream.at(i)))(1);
  std::sort(ys.begin(), ys.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double phi = std::acos(1.0 - 2.0 * ys[i]);
    const double f = std::clamp(2.0 * (phi + std::sin(phi) * std::cos(phi)) / kPi - 1.0, 0.0, 1.0);
    ks = std::max({ks, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
  }

  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::norm(sample_pure(stream.at(n + i))(0));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  // Uniform on [0, 1]: sd(mean) = sqrt(1/12 / n), sd(var) = sqrt((1/80 - 1/144) / n).
  const double z_mean = std::abs(mean - 0.5) / std::sqrt(1.0 / 12.0 / n);
  const double z_var = std::abs(var - 1.0 / 12.0) / std::sqrt((1.0 / 80.0 - 1.0 / 144.0) / n);
  return {ks < 0.006 && z_mean < 3.0 && z_var < 3.0,
          fmt("Bures KS = %.5f; Haar x mean %.5f (%.2f sd), variance %.5f (%.2f sd)", ks, mean,
              z_mean, var, z_var)};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const char* cli) {
  namespace fs = std::filesystem;
  if (cli == nullptr) {
    SweepConfig c;
    c.lambda_grid = parse_grid("0:0.95:20");
    c.ensemble = Ensemble::BuresMixed;
    c.samples = 20000;
    c.seed = kSeed;
    std::vector<std::string> outputs;
    for (unsigned w : {1u, 1u, 3u, 8u}) {
      c.workers = w;
      outputs.push_back(format_csv(compute_sweep(c)));
    }
    const bool same = std::all_of(outputs.begin(), outputs.end(),
                                  [&](const std::string& o) { return o == outputs.front(); });
    return {same, "library sweep with 1, 1, 3, 8 workers"};
  }
  const fs::path dir = fs::temp_directory_path() / "dsttomo_acceptance";
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  for (const char* w : {"1", "1", "3", "8"}) {
    const fs::path out = dir / (std::string("sweep_") + std::to_string(outputs.size()) + ".csv");
    const std::string cmd = std::string("\"") + cli +
                            "\" sweep --grid 0:0.95:20 --ensemble bures --samples 20000 --seed " +
                            std::to_string(kSeed) + " --workers " + w + " --out \"" +
                            out.string() + "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "CLI sweep failed: " + cmd};
    outputs.push_back(slurp(out));
  }
  const bool same = !outputs.front().empty() &&
                    std::all_of(outputs.begin(), outputs.end(),
                                [&](const std::string& o) { return o == outputs.front(); });
  return {same, fmt("CLI sweep CSVs with 1, 1, 3, 8 workers %s (%zu bytes)",
                    same ? "identical" : "differ", outputs.front().size())};
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"round-trip inversion", 1.0, round_trip},
      {"coupling oracle vs closed-form bases", 1.0, oracle_bases},
      {"closed-form bound vs Tr(Q F^-1)", 5.0, closed_vs_inverse},
      {"pure-state analytic average", 1.0, pure_average_checks},
      {"Monte Carlo average, pure states", 30.0, pure_monte_carlo},
      {"Monte Carlo average, Bures states at lambda 0", 30.0, mixed_monte_carlo},
      {"SIC-POVM baseline", 30.0, sic_baseline},
      {"crossover with the SIC-POVM", 1.0, crossover},
      {"finite-shot saturation of the bound", 60.0, saturation},
      {"empirical Fisher matrix", 60.0, fisher_oracle},
      {"sampler correctness", 10.0, samplers},
      {"sweep determinism across worker counts", 1e9, [cli] { return determinism(cli); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed <= c.budget_s;
    const bool pass = outcome.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s  %2zu  %-46s %7.2fs%s  %s\n", pass ? "PASS" : "FAIL", i + 1, c.name, elapsed,
                in_time ? "" : " (over budget)", outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
