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

#include "dsttomo/io.hpp"

#include <fstream>

namespace dsttomo {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return v.get<double>();
}

Eigen::Matrix2d real_matrix(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) {
    throw ValidationError(std::string(what) + " must be a 2x2 array");
  }
  Eigen::Matrix2d m;
  for (int i = 0; i < 2; ++i) {
    if (!v[i].is_array() || v[i].size() != 2) {
      throw ValidationError(std::string(what) + " must be a 2x2 array");
    }
    for (int j = 0; j < 2; ++j) m(i, j) = number(v[i][j], what);
  }
  return m;
}

}  // namespace

Density<double> state_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("state document must be a JSON object");
  Density<double> rho;
  if (doc.contains("bloch")) {
    const json& b = doc["bloch"];
    if (!b.is_array() || b.size() != 3) throw ValidationError("bloch must have three entries");
    rho = density_from_bloch<double>(
        Vector3<double>(number(b[0], "bloch"), number(b[1], "bloch"), number(b[2], "bloch")));
  } else if (doc.contains("matrix")) {
    const json& m = doc["matrix"];
    if (!m.is_object() || !m.contains("re")) {
      throw ValidationError("matrix needs an 're' part");
    }
    const Eigen::Matrix2d re = real_matrix(m["re"], "matrix.re");
    const Eigen::Matrix2d im =
        m.contains("im") ? real_matrix(m["im"], "matrix.im") : Eigen::Matrix2d::Zero();
    rho = re.cast<std::complex<double>>() + std::complex<double>(0, 1) * im.cast<std::complex<double>>();
  } else {
    throw ValidationError("state document needs a 'bloch' or 'matrix' key");
  }
  check_density(rho);
  return rho;
}

Density<double> read_state_file(const std::string& path) { return state_from_json(read_json(path)); }

ProbabilityFile probabilities_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("lambda") || !doc.contains("p")) {
    throw ValidationError("probability document needs 'lambda' and 'p'");
  }
  const auto strength = MeasurementStrength<double>::from_lambda(number(doc["lambda"], "lambda"));
  const json& p = doc["p"];
  if (!p.is_array() || p.size() != 3) throw ValidationError("p must have three rows");
  Eigen::Matrix<double, 3, 2> raw;
  for (int t = 0; t < 3; ++t) {
    if (!p[t].is_array() || p[t].size() != 2) throw ValidationError("each p row has two entries");
    for (int k = 0; k < 2; ++k) raw(t, k) = number(p[t][k], "p");
  }
  return {strength, make_probabilities(raw, strength)};
}

ProbabilityFile read_probability_file(const std::string& path) {
  return probabilities_from_json(read_json(path));
}

json to_json(const Density<double>& rho) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < 2; ++i) {
    re.push_back({rho(i, 0).real(), rho(i, 1).real()});
    im.push_back({rho(i, 0).imag(), rho(i, 1).imag()});
  }
  return {{"matrix", {{"re", re}, {"im", im}}}};
}

json to_json(const Ket<double>& v) {
  return {{"re", {v(0).real(), v(1).real()}}, {"im", {v(0).imag(), v(1).imag()}}};
}

json to_json(const Matrix3<double>& m) {
  json out = json::array();
  for (int i = 0; i < 3; ++i) out.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return out;
}

json to_json(const BasisSet<double>& basis) {
  json out = json::array();
  for (int t = 0; t < 3; ++t) out.push_back({to_json(basis(t, 0)), to_json(basis(t, 1))});
  return out;
}

json to_json(const ProbabilitySet<double>& probs, double lambda) {
  json p = json::array();
  for (int t = 0; t < 3; ++t) p.push_back({probs(t, 0), probs(t, 1)});
  return {{"lambda", lambda}, {"p", p}, {"s", probs.s}};
}

json to_json(const CrbReport<double>& report) {
  json out = {{"q", to_json(report.q)},
              {"bound", report.bound},
              {"method", report.method == CrbMethod::ClosedForm ? "closed" : "numeric"}};
  out["fisher"] = report.fisher ? to_json(*report.fisher) : json(nullptr);
  return out;
}

}  // namespace dsttomo
