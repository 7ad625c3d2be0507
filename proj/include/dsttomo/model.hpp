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
 * Direct state tomography of a qubit seen as projective measurement onto
 * three effective bases. Basis t = 0 is the computational basis; bases
 * t = 1, 2 are non-orthogonal with |<psi_0^t|psi_1^t>| = lambda, where
 * lambda = cos(2 theta) and theta is the system-pointer coupling strength.
 *
 * Indexing convention everywhere: basis t in {0, 1, 2}, outcome k in {0, 1}.
 */

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dsttomo/qubit.hpp"

namespace dsttomo {

/// Coupling strength, stored both as the angle theta and as
/// lambda = cos(2 theta). Only lambda in [0, 1) is constructible: at
/// lambda = 1 the bases stop being informationally complete.
template <typename Real = double>
class MeasurementStrength {
 public:
  static MeasurementStrength from_lambda(Real lambda) {
    if (!(lambda >= Real(0) && lambda < Real(1))) {
      std::ostringstream os;
      os << "lambda = " << lambda << " outside [0, 1)";
      throw ValidationError(os.str());
    }
    return MeasurementStrength(std::acos(lambda) / Real(2), lambda);
  }

  static MeasurementStrength from_theta(Real theta) {
    const Real quarter_pi = std::numbers::pi_v<Real> / Real(4);
    if (!(theta > Real(0) && theta <= quarter_pi)) {
      std::ostringstream os;
      os << "theta = " << theta << " outside (0, pi/4]";
      throw ValidationError(os.str());
    }
    // cos(2 * pi/4) is not exactly zero in floating point.
    const Real lambda = theta == quarter_pi ? Real(0) : std::cos(Real(2) * theta);
    if (lambda >= Real(1)) throw ValidationError("theta too small: lambda rounds to 1");
    return MeasurementStrength(theta, lambda);
  }

  Real theta() const { return theta_; }
  Real lambda() const { return lambda_; }

 private:
  MeasurementStrength(Real theta, Real lambda) : theta_(theta), lambda_(lambda) {}
  Real theta_;
  Real lambda_;
};

enum class BasisKind { Effective, Biorthogonal, Pointer };

template <typename Real = double>
struct BasisSet {
  std::array<std::array<Ket<Real>, 2>, 3> vectors;
  BasisKind kind;

  const Ket<Real>& operator()(int t, int k) const { return vectors[t][k]; }
  Ket<Real>& operator()(int t, int k) { return vectors[t][k]; }
};

/// Six outcome probabilities p(t, k) and the shared sum S of the two
/// non-orthogonal bases.
template <typename Real = double>
struct ProbabilitySet {
  Eigen::Matrix<Real, 3, 2> p;
  Real s;

  Real operator()(int t, int k) const { return p(t, k); }
};

template <typename Real>
Real s_value(Real p00, const MeasurementStrength<Real>& strength) {
  const Real l = strength.lambda();
  return Real(1) - l + Real(2) * l * p00;
}

namespace detail {

template <typename Real>
void check_lambda_open(Real lambda) {
  if (lambda >= Real(1) - Real(1e-12)) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is at the weak-measurement pole";
    throw DegenerateStrength(os.str());
  }
}

}  // namespace detail

/// Effective states evaluated at any lambda in [-1, 1]; lambda = 1 gives the
/// parallel limit and -lambda gives the biorthogonal partner set.
template <typename Real>
BasisSet<Real> effective_states_at(Real lambda, BasisKind kind = BasisKind::Effective) {
  if (!(lambda >= Real(-1) && lambda <= Real(1))) {
    throw ValidationError("lambda outside [-1, 1]");
  }
  BasisSet<Real> set;
  set.kind = kind;
  set(0, 0) = basis_ket<Real>(0);
  set(0, 1) = basis_ket<Real>(1);
  const Real head = std::sqrt((Real(1) + lambda) / Real(2));
  const Real tail = std::sqrt((Real(1) - lambda) / Real(2));
  // (-i)^(t+2): t = 1 -> i, t = 2 -> 1.
  const std::array<Complex<Real>, 3> phase = {Complex<Real>(1), Complex<Real>(0, 1),
                                              Complex<Real>(1)};
  for (int t = 1; t <= 2; ++t) {
    for (int k = 0; k < 2; ++k) {
      const Real sign = k == 0 ? Real(1) : Real(-1);
      set(t, k) = Ket<Real>(Complex<Real>(head), sign * phase[t] * tail);
    }
  }
  return set;
}

template <typename Real>
BasisSet<Real> effective_states(const MeasurementStrength<Real>& strength) {
  return effective_states_at(strength.lambda());
}

/// Dual set |phi_k^t(lambda)> = |psi_k^t(-lambda)>, with
/// <phi_k^t|psi_l^t> = sqrt(1 - lambda^2) delta_kl.
template <typename Real>
BasisSet<Real> biorthogonal_states(const MeasurementStrength<Real>& strength) {
  return effective_states_at(-strength.lambda(), BasisKind::Biorthogonal);
}

/// Pointer measurement bases |e_k^t>.
template <typename Real = double>
BasisSet<Real> pointer_bases() {
  const Real r = Real(1) / std::sqrt(Real(2));
  const Complex<Real> i(0, 1);
  BasisSet<Real> set;
  set.kind = BasisKind::Pointer;
  set(0, 0) = basis_ket<Real>(0);
  set(0, 1) = basis_ket<Real>(1);
  set(1, 0) = Ket<Real>(Complex<Real>(r), Complex<Real>(r));
  set(1, 1) = Ket<Real>(Complex<Real>(r), Complex<Real>(-r));
  set(2, 0) = Ket<Real>(Complex<Real>(r), -i * r);
  set(2, 1) = Ket<Real>(Complex<Real>(r), i * r);
  return set;
}

/// Derives the effective states from the system-pointer interaction: the
/// pointer-side contraction (I_s (x) <0|_p) U^+(theta) (|0>_s (x) |e_k^t>_p),
/// normalized and phase-fixed.
template <typename Real>
BasisSet<Real> coupling_oracle(Real theta) {
  if (!(theta >= Real(0) && theta <= std::numbers::pi_v<Real> / Real(4) + Real(1e-15))) {
    throw ValidationError("theta outside [0, pi/4]");
  }
  const Unitary4<Real> u_dag = coupling_unitary(theta).adjoint();
  const BasisSet<Real> pointer = pointer_bases<Real>();
  const Ket<Real> sys0 = basis_ket<Real>(0);
  BasisSet<Real> set;
  set.kind = BasisKind::Effective;
  for (int t = 0; t < 3; ++t) {
    for (int k = 0; k < 2; ++k) {
      const Ket4<Real> joint = u_dag * tensor(sys0, pointer(t, k));
      // Pointer is the right factor: amplitude index = 2 * system + pointer.
      Ket<Real> v(joint(0), joint(2));
      const Real norm = v.norm();
      if (norm < Real(1e-12)) {
        std::ostringstream os;
        os << "contraction for basis " << t << ", outcome " << k << " vanishes at theta = "
           << theta;
        throw DegenerateProjection(os.str());
      }
      set(t, k) = fix_global_phase<Real>(v / norm);
    }
  }
  return set;
}

/// p_kt = <psi_k^t| rho |psi_k^t>, with S cross-checked between the two
/// routes p_0t + p_1t and 1 - lambda + 2 lambda p_00.
template <typename Real>
ProbabilitySet<Real> probabilities(const Density<Real>& rho,
                                   const MeasurementStrength<Real>& strength) {
  check_density(rho);
  const BasisSet<Real> basis = effective_states(strength);
  ProbabilitySet<Real> out;
  for (int t = 0; t < 3; ++t) {
    for (int k = 0; k < 2; ++k) {
      Real p = (basis(t, k).adjoint() * rho * basis(t, k))(0, 0).real();
      if (p < Real(0) && p >= Real(-1e-14)) p = Real(0);
      out.p(t, k) = p;
    }
  }
  out.s = out.p(1, 0) + out.p(1, 1);
  const Real from_constraint = s_value(out.p(0, 0), strength);
  const Real other = out.p(2, 0) + out.p(2, 1);
  if (std::abs(out.s - from_constraint) > Real(1e-10) ||
      std::abs(other - from_constraint) > Real(1e-10)) {
    throw ConstraintViolation("basis sums disagree with 1 - lambda + 2 lambda p00");
  }
  return out;
}

/// Checks the ProbabilitySet invariants at `tol`: range, unit sum of the
/// computational basis and the S relation for the other two.
template <typename Real>
void check_probabilities(const ProbabilitySet<Real>& probs,
                         const MeasurementStrength<Real>& strength, Real tol = Real(1e-10)) {
  if (!probs.p.allFinite()) throw ConstraintViolation("non-finite probability");
  if ((probs.p.array() < -tol).any() || (probs.p.array() > Real(1) + tol).any()) {
    throw ConstraintViolation("probability outside [0, 1]");
  }
  if (std::abs(probs.p(0, 0) + probs.p(0, 1) - Real(1)) > tol) {
    throw ConstraintViolation("p00 + p10 differs from 1");
  }
  const Real s = s_value(probs.p(0, 0), strength);
  for (int t = 1; t <= 2; ++t) {
    if (std::abs(probs.p(t, 0) + probs.p(t, 1) - s) > tol) {
      std::ostringstream os;
      os << "basis " << t << " sums to " << probs.p(t, 0) + probs.p(t, 1)
         << " but 1 - lambda + 2 lambda p00 = " << s;
      throw ConstraintViolation(os.str());
    }
  }
}

/// Builds a ProbabilitySet from the six raw values, filling in S.
template <typename Real>
ProbabilitySet<Real> make_probabilities(const Eigen::Matrix<Real, 3, 2>& p,
                                        const MeasurementStrength<Real>& strength) {
  ProbabilitySet<Real> out{p, s_value(p(0, 0), strength)};
  check_probabilities(out, strength);
  return out;
}

/// Linear inversion in the biorthogonal bases. The result is Hermitian with
/// unit trace; it is positive only if the probabilities come from a state.
template <typename Real>
Density<Real> reconstruct(const ProbabilitySet<Real>& probs,
                          const MeasurementStrength<Real>& strength) {
  const Real l = strength.lambda();
  detail::check_lambda_open(l);
  const BasisSet<Real> dual = biorthogonal_states(strength);
  Density<Real> rho = Density<Real>::Zero();
  for (int t = 1; t <= 2; ++t)
    for (int k = 0; k < 2; ++k) rho += probs(t, k) * projector(dual(t, k));
  rho /= (Real(1) - l * l);
  const Real p00 = probs(0, 0);
  rho(0, 0) += (Real(1) - l) / (Real(1) + l) * (p00 - Real(1));
  rho(1, 1) -= (Real(1) + l) / (Real(1) - l) * p00;
  return rho;
}

}  // namespace dsttomo
