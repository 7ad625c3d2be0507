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

#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>
#include <vector>

#include "dsttomo/model.hpp"
#include "oracles.hpp"

using namespace dsttomo;
using Catch::Approx;
using Cd = std::complex<double>;
using Strength = MeasurementStrength<double>;

namespace {

double overlap_sq(const Ket<double>& a, const Ket<double>& b) { return std::norm(a.dot(b)); }

const std::vector<double> kLambdaGrid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                         0.6, 0.7, 0.8, 0.9, 0.99};

}  // namespace

TEST_CASE("MeasurementStrength validates its range", "[model]") {
  CHECK(Strength::from_lambda(0.0).theta() == Approx(std::numbers::pi / 4));
  CHECK(Strength::from_lambda(0.5).theta() == Approx(std::acos(0.5) / 2));
  CHECK_THROWS_AS(Strength::from_lambda(1.0), ValidationError);
  CHECK_THROWS_AS(Strength::from_lambda(-0.1), ValidationError);
  CHECK_THROWS_AS(Strength::from_lambda(std::nan("")), ValidationError);

  const Strength s = Strength::from_theta(0.3);
  CHECK(s.lambda() == Approx(std::cos(0.6)).epsilon(1e-15));
  CHECK(Strength::from_theta(std::numbers::pi / 4).lambda() == 0.0);
  CHECK_THROWS_AS(Strength::from_theta(0.0), ValidationError);
  CHECK_THROWS_AS(Strength::from_theta(1.0), ValidationError);
}

TEST_CASE("effective_states examples", "[model]") {
  SECTION("parallel limit lambda = 1") {
    const auto b = effective_states_at(1.0);
    for (int t = 1; t <= 2; ++t)
      for (int k = 0; k < 2; ++k) CHECK((b(t, k) - basis_ket<double>(0)).norm() == 0.0);
  }
  SECTION("lambda = 0 gives three mutually unbiased bases") {
    const auto b = effective_states(Strength::from_lambda(0.0));
    for (int t = 0; t < 3; ++t) {
      CHECK(overlap_sq(b(t, 0), b(t, 1)) < 1e-30);
      for (int r = t + 1; r < 3; ++r)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) CHECK(overlap_sq(b(t, k), b(r, l)) == Approx(0.5));
    }
  }
  SECTION("lambda = 0.5 overlap") {
    const auto b = effective_states(Strength::from_lambda(0.5));
    CHECK(b(1, 0).dot(b(1, 1)).real() == Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(b(1, 0).dot(b(1, 1)).imag()) < 1e-16);
  }
  SECTION("closed-form amplitudes") {
    const double l = 0.3;
    const auto b = effective_states(Strength::from_lambda(l));
    const double head = std::sqrt((1 + l) / 2), tail = std::sqrt((1 - l) / 2);
    CHECK(b(1, 0)(0) == Cd(head, 0));
    CHECK(b(1, 0)(1) == Cd(0, tail));
    CHECK(b(1, 1)(1) == Cd(0, -tail));
    CHECK(b(2, 0)(1) == Cd(tail, 0));
    CHECK(b(2, 1)(1) == Cd(-tail, 0));
  }
}

TEST_CASE("lambda = 0 effective bases equal the pointer bases as sets", "[model]") {
  const auto psi = effective_states(Strength::from_lambda(0.0));
  const auto e = pointer_bases<double>();
  for (int t = 0; t < 3; ++t) {
    for (int k = 0; k < 2; ++k) {
      bool found = false;
      for (int r = 0; r < 3; ++r)
        for (int l = 0; l < 2; ++l) found = found || overlap_sq(psi(t, k), e(r, l)) > 1 - 1e-14;
      CHECK(found);
    }
  }
}

TEST_CASE("equidistance and normalization across lambda", "[model][property]") {
  for (double l = 0.0; l <= 1.0 + 1e-12; l += 0.01) {
    const auto b = effective_states_at(std::min(l, 1.0));
    for (int t = 0; t < 3; ++t)
      for (int k = 0; k < 2; ++k) REQUIRE(std::abs(b(t, k).norm() - 1.0) < 1e-12);
    REQUIRE(std::abs(b(0, 0).dot(b(0, 1))) == 0.0);
    for (int t = 1; t <= 2; ++t)
      REQUIRE(std::abs(b(t, 0).dot(b(t, 1))) == Approx(std::min(l, 1.0)).margin(1e-12));
  }
}

TEST_CASE("coupling_oracle examples", "[model]") {
  SECTION("theta -> 0, (1,0) is |0>") {
    const auto b = coupling_oracle(1e-9);
    CHECK((b(1, 0) - basis_ket<double>(0)).norm() < 1e-8);
  }
  SECTION("theta = pi/4, (2,0) is |+>") {
    const auto b = coupling_oracle(std::numbers::pi / 4);
    const Ket<double> plus(Cd(1 / std::sqrt(2.0)), Cd(1 / std::sqrt(2.0)));
    CHECK((b(2, 0) - plus).norm() < 1e-15);
  }
  SECTION("(0,1) is |1> for any theta > 0") {
    for (double theta : {1e-6, 0.2, 0.5, std::numbers::pi / 4}) {
      CHECK((coupling_oracle(theta)(0, 1) - basis_ket<double>(1)).norm() < 1e-15);
    }
  }
  SECTION("theta = 0 annihilates the (0,1) contraction") {
    CHECK_THROWS_AS(coupling_oracle(0.0), DegenerateProjection);
  }
  SECTION("out of range") { CHECK_THROWS_AS(coupling_oracle(1.0), ValidationError); }
}

TEST_CASE("coupling_oracle matches the closed form on a theta grid", "[model][property]") {
  for (int j = 1; j <= 100; ++j) {
    const double theta = j * std::numbers::pi / 400.0;
    const auto oracle_set = coupling_oracle(theta);
    // Closed form evaluated from theta directly.
    const auto closed = effective_states_at(std::cos(2 * theta));
    for (int t = 0; t < 3; ++t)
      for (int k = 0; k < 2; ++k)
        REQUIRE((oracle_set(t, k) - closed(t, k)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("biorthogonal_states examples", "[model]") {
  const auto eff0 = effective_states(Strength::from_lambda(0.0));
  const auto dual0 = biorthogonal_states(Strength::from_lambda(0.0));
  CHECK(dual0.kind == BasisKind::Biorthogonal);
  for (int t = 0; t < 3; ++t)
    for (int k = 0; k < 2; ++k) CHECK(eff0(t, k) == dual0(t, k));

  const auto s = Strength::from_lambda(0.5);
  const auto eff = effective_states(s);
  const auto dual = biorthogonal_states(s);
  CHECK(dual(1, 0).dot(eff(1, 0)).real() == Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK(std::abs(dual(1, 0).dot(eff(1, 1))) < 1e-12);
}

TEST_CASE("biorthogonality and the overlap table", "[model][property]") {
  for (double l : kLambdaGrid) {
    const auto s = Strength::from_lambda(l);
    const auto psi = effective_states(s);
    const auto phi = biorthogonal_states(s);
    const double l2 = l * l;
    for (int t = 1; t <= 2; ++t) {
      for (int k = 0; k < 2; ++k) {
        for (int m = 0; m < 2; ++m) {
          const Cd inner = phi(t, k).dot(psi(t, m));
          REQUIRE(std::abs(inner - Cd(k == m ? std::sqrt(1 - l2) : 0.0)) < 1e-12);
          REQUIRE(overlap_sq(phi(t, k), phi(t, m)) ==
                  Approx((1 - l2) * (k == m) + l2).margin(1e-12));
          REQUIRE(overlap_sq(phi(t, k), phi(3 - t, m)) == Approx((1 + l2) / 2).margin(1e-12));
        }
        REQUIRE(overlap_sq(phi(0, 0), phi(t, k)) == Approx((1 - l) / 2).margin(1e-12));
        REQUIRE(overlap_sq(phi(0, 1), phi(t, k)) == Approx((1 + l) / 2).margin(1e-12));
      }
    }
  }
}

TEST_CASE("s_value examples", "[model]") {
  CHECK(s_value(0.5, Strength::from_lambda(0.3)) == Approx(1.0).epsilon(1e-15));
  CHECK(s_value(1.0, Strength::from_lambda(0.5)) == Approx(1.5).epsilon(1e-15));
  CHECK(s_value(0.0, Strength::from_lambda(0.9)) == Approx(0.1).epsilon(1e-14));
}

TEST_CASE("probabilities examples", "[model]") {
  SECTION("maximally mixed") {
    for (double l : {0.0, 0.4, 0.9}) {
      const auto p = probabilities<double>(0.5 * Density<double>::Identity(),
                                           Strength::from_lambda(l));
      CHECK((p.p.array() - 0.5).abs().maxCoeff() < 1e-15);
      CHECK(p.s == Approx(1.0));
    }
  }
  SECTION("|0><0| at lambda 0.5") {
    const auto p = probabilities(projector(basis_ket<double>(0)), Strength::from_lambda(0.5));
    CHECK(p(0, 0) == 1.0);
    CHECK(p(0, 1) == 0.0);
    for (int t = 1; t <= 2; ++t)
      for (int k = 0; k < 2; ++k) CHECK(p(t, k) == Approx(0.75).epsilon(1e-15));
    CHECK(p.s == Approx(1.5).epsilon(1e-15));
  }
  SECTION("|1><1|") {
    for (double l : {0.2, 0.7}) {
      const auto p = probabilities(projector(basis_ket<double>(1)), Strength::from_lambda(l));
      CHECK(p(0, 0) == 0.0);
      CHECK(p.s == Approx(1 - l).epsilon(1e-14));
    }
  }
  SECTION("rejects non-states") {
    Density<double> bad;
    bad << Cd(1.5), Cd(0), Cd(0), Cd(-0.5);
    CHECK_THROWS_AS(probabilities(bad, Strength::from_lambda(0.5)), InvalidState);
  }
}

TEST_CASE("probabilities satisfy the basis-sum constraint", "[model][property]") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const oracle::Mat2 rho = oracle::random_density(rng);
    for (double l : kLambdaGrid) {
      const auto s = Strength::from_lambda(l);
      const auto p = probabilities<double>(rho, s);
      REQUIRE(p(0, 0) + p(0, 1) == Approx(1.0).margin(1e-12));
      REQUIRE(p(1, 0) + p(1, 1) == Approx(1 - l + 2 * l * p(0, 0)).margin(1e-12));
      REQUIRE(p(2, 0) + p(2, 1) == Approx(1 - l + 2 * l * p(0, 0)).margin(1e-12));
      REQUIRE((p.p.array() >= 0.0).all());
    }
  }
}

TEST_CASE("check_probabilities flags broken inputs", "[model]") {
  const auto s = Strength::from_lambda(0.5);
  Eigen::Matrix<double, 3, 2> p;
  p << 0.5, 0.5, 0.5, 0.5, 0.5, 0.5;
  CHECK_NOTHROW(make_probabilities(p, s));
  p(1, 0) = 0.6;
  CHECK_THROWS_AS(make_probabilities(p, s), ConstraintViolation);
  p << 0.5, 0.4, 0.5, 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(make_probabilities(p, s), ConstraintViolation);
  p << 1.2, -0.2, 0.5, 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(make_probabilities(p, s), ConstraintViolation);
}

TEST_CASE("reconstruct examples", "[model]") {
  SECTION("|0><0| at lambda 0.5") {
    const auto s = Strength::from_lambda(0.5);
    const Density<double> rho = projector(basis_ket<double>(0));
    CHECK(hs_distance_sq(reconstruct(probabilities(rho, s), s), rho) < 1e-24);
  }
  SECTION("uniform data at lambda 0") {
    const auto s = Strength::from_lambda(0.0);
    Eigen::Matrix<double, 3, 2> p = Eigen::Matrix<double, 3, 2>::Constant(0.5);
    const Density<double> rho = reconstruct(make_probabilities(p, s), s);
    CHECK((rho - 0.5 * Density<double>::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("lambda 0 reduces to the MUB formula") {
    const auto s = Strength::from_lambda(0.0);
    Eigen::Matrix<double, 3, 2> p;
    p << 0.3, 0.7, 0.9, 0.1, 0.45, 0.55;  // generic, not necessarily physical
    const ProbabilitySet<double> probs = make_probabilities(p, s);
    const auto psi = effective_states(s);
    Density<double> mub = -Density<double>::Identity();
    for (int t = 0; t < 3; ++t)
      for (int k = 0; k < 2; ++k) mub += p(t, k) * projector(psi(t, k));
    CHECK((reconstruct(probs, s) - mub).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("reconstruct inverts probabilities", "[model][property]") {
  std::mt19937_64 rng(29);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const oracle::Mat2 rho = oracle::random_density(rng);
    for (double l : kLambdaGrid) {
      const auto s = Strength::from_lambda(l);
      const Density<double> back = reconstruct(probabilities<double>(rho, s), s);
      worst = std::max(worst, hs_distance_sq<double>(back, rho));
      REQUIRE(is_hermitian(back));
      REQUIRE(std::abs(back.trace() - Cd(1)) < 1e-10);
    }
  }
  CHECK(worst < 1e-20);
}

TEST_CASE("reconstruct output is Hermitian with unit trace for unphysical data", "[model]") {
  const auto s = Strength::from_lambda(0.6);
  Eigen::Matrix<double, 3, 2> p;
  // Orthogonal to two non-orthogonal vectors at once: no state does that.
  p << 0.5, 0.5, 0.0, 1.0, 1.0, 0.0;
  const Density<double> rho = reconstruct(make_probabilities(p, s), s);
  CHECK(is_hermitian(rho));
  CHECK(std::abs(rho.trace() - Cd(1)) < 1e-12);
  CHECK_FALSE(is_density(rho));
}
