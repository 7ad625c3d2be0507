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

// Command-line front end. Exit codes: 0 success, 2 validation error,
// 3 numerical error, 4 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "dsttomo/crb.hpp"
#include "dsttomo/experiment.hpp"
#include "dsttomo/io.hpp"
#include "dsttomo/model.hpp"
#include "dsttomo/sampling.hpp"
#include "dsttomo/sweep.hpp"

namespace {

using namespace dsttomo;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

void print(const json& doc) { std::cout << doc.dump(2) << '\n'; }

void print_basis_text(const char* title, const BasisSet<double>& basis) {
  std::cout << title << '\n';
  for (int t = 0; t < 3; ++t) {
    for (int k = 0; k < 2; ++k) {
      const Ket<double>& v = basis(t, k);
      std::cout << "  t=" << t << " k=" << k << "  (" << v(0).real() << std::showpos << v(0).imag()
                << "i, " << std::noshowpos << v(1).real() << std::showpos << v(1).imag() << "i)"
                << std::noshowpos << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct state tomography of a qubit: effective bases, reconstruction and "
               "Cramer-Rao error bounds"};
  app.require_subcommand(1);

  double lambda = 0.0;
  std::string state_path, probs_path, out_path, grid_spec, ensemble_name_arg = "pure";
  std::optional<std::string> svg_path;
  std::string method = "closed";
  std::uint64_t samples = 100000, seed = 0, count = 1, shots = 10000, runs = 1000;
  unsigned workers = 1;
  double tol = 1e-6;
  bool as_json = false;
  std::uint64_t mixed_samples = 100000;

  auto* bases = app.add_subcommand("bases", "Effective and biorthogonal bases at lambda");
  bases->add_option("--lambda", lambda, "lambda = cos(2 theta) in [0, 1)")->required();
  bases->add_flag("--json", as_json, "JSON output");

  auto* probs_cmd = app.add_subcommand("probabilities", "Outcome probabilities of a state");
  probs_cmd->add_option("--state", state_path, "State JSON file")->required();
  probs_cmd->add_option("--lambda", lambda, "lambda in [0, 1)")->required();

  auto* recon = app.add_subcommand("reconstruct", "Linear inversion from probabilities");
  recon->add_option("--probs", probs_path, "Probability JSON file")->required();
  auto* recon_lambda = recon->add_option("--lambda", lambda, "lambda; must match the file");

  auto* crb = app.add_subcommand("crb", "Cramer-Rao bound for one state");
  crb->add_option("--state", state_path, "State JSON file")->required();
  crb->add_option("--lambda", lambda, "lambda in [0, 1)")->required();
  crb->add_option("--method", method, "closed or numeric")
      ->check(CLI::IsMember({"closed", "numeric"}));

  auto* sic = app.add_subcommand("sic", "SIC-POVM bound for a state or an ensemble");
  auto* sic_state = sic->add_option("--state", state_path, "State JSON file");
  auto* sic_ens = sic->add_option("--ensemble", ensemble_name_arg, "pure, bures or paper-literal");
  sic->add_option("--samples", samples, "Ensemble size");
  sic->add_option("--seed", seed, "64-bit seed");
  sic_state->excludes(sic_ens);

  auto* sample = app.add_subcommand("sample", "Draw random states");
  sample->add_option("--ensemble", ensemble_name_arg, "pure, bures or paper-literal");
  sample->add_option("--count", count, "Number of states");
  sample->add_option("--seed", seed, "64-bit seed");

  auto* simulate = app.add_subcommand("simulate", "Finite-shot experiment and empirical MSE");
  simulate->add_option("--state", state_path, "State JSON file")->required();
  simulate->add_option("--lambda", lambda, "lambda in [0, 1)")->required();
  simulate->add_option("--shots", shots, "Post-selected shots per basis");
  simulate->add_option("--runs", runs, "Independent repetitions");
  simulate->add_option("--seed", seed, "64-bit seed");
  simulate->add_option("--workers", workers, "Worker threads");

  auto* sweep = app.add_subcommand("sweep", "Ensemble-averaged bound over a lambda grid");
  sweep->add_option("--grid", grid_spec, "A:B:STEPS")->required();
  sweep->add_option("--ensemble", ensemble_name_arg, "pure, bures or paper-literal");
  sweep->add_option("--samples", samples, "States per grid point");
  sweep->add_option("--seed", seed, "64-bit seed");
  sweep->add_option("--out", out_path, "CSV output path")->required();
  sweep->add_option("--svg", svg_path, "SVG chart output path");
  sweep->add_option("--workers", workers, "Worker threads");

  auto* cross = app.add_subcommand("crossover", "lambda where DST meets the SIC-POVM bound");
  cross->add_option("--tol", tol, "Bisection tolerance (>= 1e-6)");
  cross->add_option("--mixed-samples", mixed_samples,
                    "Samples for the Bures-ensemble crossover (0 skips it)");
  cross->add_option("--seed", seed, "64-bit seed for the Bures crossover");
  cross->add_option("--workers", workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  std::cout << std::setprecision(17);
  try {
    if (*bases) {
      const auto strength = MeasurementStrength<double>::from_lambda(lambda);
      const auto eff = effective_states(strength);
      const auto dual = biorthogonal_states(strength);
      if (as_json) {
        print({{"lambda", lambda},
               {"theta", strength.theta()},
               {"effective", to_json(eff)},
               {"biorthogonal", to_json(dual)}});
      } else {
        std::cout << "lambda = " << lambda << ", theta = " << strength.theta() << '\n';
        print_basis_text("effective |psi_k^t>:", eff);
        print_basis_text("biorthogonal |phi_k^t>:", dual);
      }
    } else if (*probs_cmd) {
      const auto strength = MeasurementStrength<double>::from_lambda(lambda);
      print(to_json(probabilities(read_state_file(state_path), strength), lambda));
    } else if (*recon) {
      const ProbabilityFile file = read_probability_file(probs_path);
      if (recon_lambda->count() > 0 && std::abs(lambda - file.strength.lambda()) > 1e-12) {
        throw ValidationError("--lambda disagrees with the lambda in the probability file");
      }
      const Density<double> rho = reconstruct(file.probs, file.strength);
      json out = to_json(rho);
      const Vector3<double> b = bloch_vector(rho);
      out["bloch"] = {b(0), b(1), b(2)};
      out["physical"] = is_density(rho);
      print(out);
    } else if (*crb) {
      const auto strength = MeasurementStrength<double>::from_lambda(lambda);
      const auto probs = probabilities(read_state_file(state_path), strength);
      const auto report =
          method == "closed" ? crb_closed(probs, strength) : crb_numeric(probs, strength);
      json out = to_json(report);
      out["lambda"] = lambda;
      out["e_min"] = std::sqrt(report.bound);
      print(out);
    } else if (*sic) {
      if (sic_state->count() > 0) {
        const Density<double> rho = read_state_file(state_path);
        const auto p = sic_probabilities(rho);
        const double bound = sic_crb(p);
        print({{"p", {p(0), p(1), p(2), p(3)}}, {"bound", bound}, {"e_min", std::sqrt(bound)}});
      } else {
        const Ensemble ens = parse_ensemble(ensemble_name_arg);
        const MeanEstimate avg = sic_ensemble_average(ens, samples, RandomStream(seed));
        print({{"ensemble", ensemble_name(ens)},
               {"samples", avg.samples},
               {"excluded", avg.excluded},
               {"mean_e2", avg.mean},
               {"stderr", avg.stderr_mean},
               {"e_min", avg.root()},
               {"seed", seed}});
      }
    } else if (*sample) {
      const Ensemble ens = parse_ensemble(ensemble_name_arg);
      const RandomStream stream(seed);
      json out = json::array();
      for (std::uint64_t i = 0; i < count; ++i) {
        const Density<double> rho = sample_state(ens, stream.at(i));
        json doc = to_json(rho);
        const Vector3<double> b = bloch_vector(rho);
        doc["bloch"] = {b(0), b(1), b(2)};
        out.push_back(doc);
      }
      print(out);
    } else if (*simulate) {
      const auto strength = MeasurementStrength<double>::from_lambda(lambda);
      const Density<double> rho = read_state_file(state_path);
      const EmpiricalResult res =
          empirical_mse(rho, strength, shots, runs, RandomStream(seed), workers);
      const double bound = crb_closed(probabilities(rho, strength), strength).bound;
      print({{"lambda", lambda},
             {"shots", res.shots},
             {"runs", res.runs},
             {"mean_e2", res.mean_e2},
             {"stderr", res.stderr_e2},
             {"scaled_mse", static_cast<double>(res.shots) * res.mean_e2},
             {"scaled_stderr", static_cast<double>(res.shots) * res.stderr_e2},
             {"crb_closed", bound},
             {"seed", seed}});
    } else if (*sweep) {
      SweepConfig config;
      config.lambda_grid = parse_grid(grid_spec);
      config.ensemble = parse_ensemble(ensemble_name_arg);
      config.samples = samples;
      config.seed = seed;
      config.output_path = out_path;
      config.svg_path = svg_path;
      config.workers = workers;
      const auto rows = run_sweep(config);
      std::cerr << "wrote " << rows.size() << " rows to " << out_path << '\n';
    } else if (*cross) {
      json out = {{"pure_closed_form", find_crossover(tol)}};
      if (mixed_samples > 0) {
        const Crossover c = find_mixed_crossover(Ensemble::BuresMixed, mixed_samples,
                                                 std::max(tol, 1e-6), RandomStream(seed), workers);
        out["bures_mc"] = {{"lambda", c.lambda},
                           {"uncertainty", c.uncertainty},
                           {"sic_mean_e2", c.sic_reference},
                           {"samples", mixed_samples},
                           {"seed", seed}};
      }
      print(out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
