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

#include "dsttomo/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dsttomo/crb.hpp"
#include "dsttomo/reduce.hpp"

namespace dsttomo {

Ensemble parse_ensemble(std::string_view name) {
  if (name == "pure") return Ensemble::PureHaar;
  if (name == "bures") return Ensemble::BuresMixed;
  if (name == "paper-literal") return Ensemble::PaperLiteralMixed;
  throw ValidationError("unknown ensemble '" + std::string(name) +
                        "' (expected pure, bures or paper-literal)");
}

std::string_view ensemble_name(Ensemble ensemble) {
  switch (ensemble) {
    case Ensemble::PureHaar:
      return "pure";
    case Ensemble::BuresMixed:
      return "bures";
    case Ensemble::PaperLiteralMixed:
      return "paper-literal";
  }
  return "?";
}

Density<double> sample_state(Ensemble ensemble, const RandomStream& stream) {
  switch (ensemble) {
    case Ensemble::PureHaar:
      return projector(sample_pure(stream));
    case Ensemble::BuresMixed:
      return sample_bures(stream);
    case Ensemble::PaperLiteralMixed:
      return mixed_from_param(sample_mixed_param(stream));
  }
  throw ValidationError("unknown ensemble");
}

double MeanEstimate::root() const { return std::sqrt(mean); }

double MeanEstimate::root_stderr() const { return stderr_mean / (2.0 * std::sqrt(mean)); }

namespace {

using Moments = Eigen::Array3d;  // sum, sum of squares, excluded

MeanEstimate finish(const Moments& sums, std::uint64_t samples) {
  const double excluded = sums(2);
  const double m = static_cast<double>(samples) - excluded;
  if (m < 2.0) throw NumericalError("fewer than two usable samples");
  const double mean = sums(0) / m;
  const double var = std::max(0.0, (sums(1) - m * mean * mean) / (m - 1.0));
  return {mean, std::sqrt(var / m), samples, static_cast<std::uint64_t>(excluded)};
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

MeanEstimate ensemble_average(const MeasurementStrength<double>& strength, Ensemble ensemble,
                              std::uint64_t samples, const RandomStream& stream,
                              unsigned workers) {
  detail::check_lambda_open(strength.lambda());
  if (samples < 2) throw ValidationError("samples must be at least 2");
  const Moments sums = block_reduce<Moments>(samples, workers, Moments::Zero(), [&](std::size_t i) {
    const Density<double> rho = sample_state(ensemble, stream.at(i));
    const double e2 = crb_closed(probabilities(rho, strength), strength).bound;
    return Moments(e2, e2 * e2, 0.0);
  });
  return finish(sums, samples);
}

MeanEstimate sic_ensemble_average(Ensemble ensemble, std::uint64_t samples,
                                  const RandomStream& stream, unsigned workers) {
  if (samples < 2) throw ValidationError("samples must be at least 2");
  const Moments sums = block_reduce<Moments>(samples, workers, Moments::Zero(), [&](std::size_t i) {
    const Density<double> rho = sample_state(ensemble, stream.at(i));
    try {
      const double e2 = sic_crb(rho);
      return Moments(e2, e2 * e2, 0.0);
    } catch (const NumericalError&) {
      return Moments(0.0, 0.0, 1.0);
    }
  });
  return finish(sums, samples);
}

double find_crossover(double tol) {
  if (!(tol >= 1e-6)) throw ValidationError("crossover tolerance must be at least 1e-6");
  const auto excess = [](double l) {
    return pure_average(MeasurementStrength<double>::from_lambda(l)) - kSicPureAverage;
  };
  double lo = 0.5;
  double hi = 0.95;
  if (!(excess(lo) < 0.0 && excess(hi) > 0.0)) {
    throw NoCrossover("pure-state average does not cross the SIC value on [0.5, 0.95]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Crossover find_mixed_crossover(Ensemble ensemble, std::uint64_t samples, double tol,
                               const RandomStream& stream, unsigned workers) {
  if (!(tol >= 1e-6)) throw ValidationError("crossover tolerance must be at least 1e-6");
  const MeanEstimate sic = sic_ensemble_average(ensemble, samples, stream, workers);
  const auto dst = [&](double l) {
    return ensemble_average(MeasurementStrength<double>::from_lambda(l), ensemble, samples,
                            stream, workers);
  };
  double lo = 0.0;
  double hi = 0.95;
  if (!(dst(lo).mean < sic.mean && dst(hi).mean > sic.mean)) {
    throw NoCrossover("ensemble average does not cross the SIC value on [0, 0.95]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (dst(mid).mean < sic.mean ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  const double h = 1e-3;
  const MeanEstimate at = dst(root);
  const double slope = (dst(std::min(root + h, 0.99)).mean - dst(root - h).mean) /
                       (std::min(root + h, 0.99) - (root - h));
  const double spread = std::hypot(at.stderr_mean, sic.stderr_mean);
  return {root, spread / slope, sic.mean};
}

void validate(const SweepConfig& config) {
  if (config.lambda_grid.empty()) throw ValidationError("lambda grid is empty");
  for (std::size_t i = 0; i < config.lambda_grid.size(); ++i) {
    const double l = config.lambda_grid[i];
    if (!(l >= 0.0 && l < 1.0)) throw ValidationError("lambda grid value outside [0, 1)");
    if (i > 0 && !(l > config.lambda_grid[i - 1])) {
      throw ValidationError("lambda grid is not strictly increasing");
    }
  }
  if (config.samples < 2) throw ValidationError("samples must be at least 2");
}

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = spec.find(':', start)) != std::string_view::npos;) {
    parts.push_back(spec.substr(start, pos - start));
    start = pos + 1;
  }
  parts.push_back(spec.substr(start));
  if (parts.size() != 3) throw ValidationError("grid must look like A:B:STEPS");

  const auto to_double = [](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ValidationError("bad number '" + std::string(s) + "' in grid");
    }
    return v;
  };
  const double a = to_double(parts[0]);
  const double b = to_double(parts[1]);
  std::uint64_t steps = 0;
  const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), steps);
  if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || steps == 0) {
    throw ValidationError("grid STEPS must be a positive integer");
  }
  if (steps == 1) return {a};
  std::vector<double> grid(steps);
  for (std::uint64_t i = 0; i < steps; ++i) {
    grid[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  grid.back() = b;
  return grid;
}

std::vector<SweepRow> compute_sweep(const SweepConfig& config) {
  validate(config);
  const RandomStream stream(config.seed);
  const MeanEstimate sic_mixed =
      sic_ensemble_average(Ensemble::BuresMixed, config.samples, stream, config.workers);
  std::vector<SweepRow> rows;
  rows.reserve(config.lambda_grid.size());
  for (const double l : config.lambda_grid) {
    const auto strength = MeasurementStrength<double>::from_lambda(l);
    const MeanEstimate mc =
        ensemble_average(strength, config.ensemble, config.samples, stream, config.workers);
    SweepRow row;
    row.lambda = l;
    if (config.ensemble == Ensemble::PureHaar) row.e2_closed = pure_average(strength);
    row.e2_mc = mc.mean;
    row.e2_mc_stderr = mc.stderr_mean;
    row.e_min_mc = mc.root();
    row.e_sic_pure = std::sqrt(kSicPureAverage);
    row.e_sic_mixed = sic_mixed.root();
    row.samples = config.samples;
    row.seed = config.seed;
    rows.push_back(row);
  }
  return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "lambda,e2_closed,e2_mc,e2_mc_stderr,e_min_mc,e_sic_pure,e_sic_mixed,samples,seed\n";
  for (const SweepRow& r : rows) {
    out += fmt17(r.lambda) + ',';
    if (r.e2_closed) out += fmt17(*r.e2_closed);
    out += ',' + fmt17(r.e2_mc) + ',' + fmt17(r.e2_mc_stderr) + ',' + fmt17(r.e_min_mc) + ',' +
           fmt17(r.e_sic_pure) + ',' + fmt17(r.e_sic_mixed) + ',' + std::to_string(r.samples) +
           ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::string render_svg(const std::vector<SweepRow>& rows, Ensemble ensemble) {
  constexpr double kWidth = 640, kHeight = 420;
  constexpr double kLeft = 60, kRight = 20, kTop = 20, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  // Analytic pure-state curve over the swept range.
  std::vector<std::pair<double, double>> closed;
  if (!rows.empty()) {
    const double a = rows.front().lambda, b = rows.back().lambda;
    constexpr int kPoints = 200;
    for (int i = 0; i <= kPoints; ++i) {
      const double l = a + (b - a) * i / kPoints;
      closed.emplace_back(l, std::sqrt(pure_average(MeasurementStrength<double>::from_lambda(l))));
    }
  }

  double y_max = 2.5;
  for (const SweepRow& r : rows) y_max = std::max({y_max, r.e_min_mc, r.e_sic_mixed});
  for (const auto& [l, e] : closed) y_max = std::max(y_max, e);
  y_max = std::ceil(y_max * 1.05 * 2.0) / 2.0;

  const auto px = [&](double l) { return kLeft + l * plot_w; };
  const auto py = [&](double e) { return kTop + plot_h * (1.0 - e / y_max); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  // Axes and ticks.
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(0) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\""
      << py(y_max) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double l = 0.2 * i;
    svg << "<text x=\"" << fmt3(px(l)) << "\" y=\"" << fmt3(py(0) + 18)
        << "\" text-anchor=\"middle\">" << fmt3(l).substr(0, 3) << "</text>\n";
  }
  for (double e = 0.0; e <= y_max + 1e-9; e += 0.5) {
    svg << "<text x=\"" << fmt3(px(0) - 6) << "\" y=\"" << fmt3(py(e) + 4)
        << "\" text-anchor=\"end\">" << fmt3(e).substr(0, 3) << "</text>\n";
  }
  svg << "<text x=\"" << fmt3(px(0.5)) << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">lambda = cos(2 theta)</text>\n";
  svg << "<text x=\"15\" y=\"" << fmt3(py(y_max / 2))
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << fmt3(py(y_max / 2))
      << ")\">E_min</text>\n";

  // SIC references and the pure-state crossover.
  const auto hline = [&](double e, const char* colour, const char* dash) {
    svg << "<line x1=\"" << px(0) << "\" y1=\"" << fmt3(py(e)) << "\" x2=\"" << px(1)
        << "\" y2=\"" << fmt3(py(e)) << "\" stroke=\"" << colour << "\" stroke-dasharray=\""
        << dash << "\"/>\n";
  };
  hline(std::sqrt(kSicPureAverage), "red", "6 4");
  if (!rows.empty()) hline(rows.front().e_sic_mixed, "blue", "none");
  const double cross = find_crossover(1e-6);
  svg << "<line x1=\"" << fmt3(px(cross)) << "\" y1=\"" << py(0) << "\" x2=\"" << fmt3(px(cross))
      << "\" y2=\"" << py(y_max) << "\" stroke=\"magenta\" stroke-dasharray=\"8 3 2 3\"/>\n";

  const auto polyline = [&](const std::vector<std::pair<double, double>>& pts,
                            const char* colour, const char* dash) {
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" "
        << "stroke-dasharray=\"" << dash << "\" points=\"";
    for (const auto& [l, e] : pts) svg << fmt3(px(l)) << ',' << fmt3(py(e)) << ' ';
    svg << "\"/>\n";
  };
  polyline(closed, "red", "6 4");
  std::vector<std::pair<double, double>> mc;
  for (const SweepRow& r : rows) mc.emplace_back(r.lambda, r.e_min_mc);
  polyline(mc, ensemble == Ensemble::PureHaar ? "darkred" : "blue", "none");

  svg << "<text x=\"" << fmt3(px(0.02)) << "\" y=\"" << kTop + 12 << "\">Monte Carlo ("
      << ensemble_name(ensemble) << "), analytic pure average, SIC references</text>\n";
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  std::vector<SweepRow> rows = compute_sweep(config);
  write_file(config.output_path, format_csv(rows));
  if (config.svg_path) write_file(*config.svg_path, render_svg(rows, config.ensemble));
  return rows;
}

}  // namespace dsttomo
