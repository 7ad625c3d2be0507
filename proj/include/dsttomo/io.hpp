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
 * JSON file formats.
 *
 * State file, one of
 *   {"bloch": [bx, by, bz]}
 *   {"matrix": {"re": [[a, b], [c, d]], "im": [[e, f], [g, h]]}}
 *
 * Probability file
 *   {"lambda": L, "p": [[p00, p10], [p01, p11], [p02, p12]]}
 * i.e. one row per basis t, outcomes k = 0, 1 within the row.
 */

#pragma once

#include <json.hpp>

#include <string>

#include "dsttomo/crb.hpp"
#include "dsttomo/model.hpp"
#include "dsttomo/sampling.hpp"

namespace dsttomo {

/// Parses and validates (Hermitian, unit trace, PSD) a state document.
Density<double> state_from_json(const nlohmann::json& doc);
Density<double> read_state_file(const std::string& path);

struct ProbabilityFile {
  MeasurementStrength<double> strength;
  ProbabilitySet<double> probs;
};

/// Parses a probability document and checks the basis-sum constraints at 1e-10.
ProbabilityFile probabilities_from_json(const nlohmann::json& doc);
ProbabilityFile read_probability_file(const std::string& path);

nlohmann::json to_json(const Density<double>& rho);
nlohmann::json to_json(const Ket<double>& v);
nlohmann::json to_json(const Matrix3<double>& m);
nlohmann::json to_json(const BasisSet<double>& basis);
nlohmann::json to_json(const ProbabilitySet<double>& probs, double lambda);
nlohmann::json to_json(const CrbReport<double>& report);

}  // namespace dsttomo
