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
 * Cramer-Rao lower bounds on the mean squared Hilbert-Schmidt error.
 *
 * The free parameters of the direct tomography model are (p00, p01, p02);
 * the remaining outcomes follow from p10 = 1 - p00 and p1t = S - p0t. The
 * squared error is the quadratic form dp^T Q dp in those parameters and the
 * per-trial bound is Tr(Q F^-1).
 *
 * The SIC-POVM baseline uses the tetrahedron frame with parameters
 * (p1, p2, p3) and p4 = 1 - p1 - p2 - p3.
 */

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "dsttomo/model.hpp"
#include "dsttomo/qubit.hpp"

namespace dsttomo {

/// Smallest probability admitted into a Fisher matrix.
template <typename Real>
inline constexpr Real kProbabilityFloor = Real(1e-12);

enum class CrbMethod { NumericInversion, ClosedForm };

template <typename Real = double>
struct CrbReport {
  Matrix3<Real> q;
  /// Absent when some probability is below the floor; the closed form does
  /// not need it.
  std::optional<Matrix3<Real>> fisher;
  Real bound;
  CrbMethod method;
};

template <typename Real>
Matrix3<Real> q_matrix(const MeasurementStrength<Real>& strength) {
  const Real l = strength.lambda();
  detail::check_lambda_open(l);
  Matrix3<Real> q;
  q << Real(1) + l * l, -l, -l,  //
      -l, Real(1), Real(0),      //
      -l, Real(0), Real(1);
  return Real(2) / (Real(1) - l * l) * q;
}

namespace detail {

template <typename Real>
void check_floor(const ProbabilitySet<Real>& probs, Real eps) {
  for (int t = 0; t < 3; ++t) {
    for (int k = 0; k < 2; ++k) {
      if (!(probs(t, k) >= eps)) {
        std::ostringstream os;
        os << "p(" << t << "," << k << ") = " << probs(t, k)
           << " is below the Fisher floor " << eps;
        throw SingularFisher(os.str());
      }
    }
  }
}

}  // namespace detail

template <typename Real>
Matrix3<Real> fisher_matrix(const ProbabilitySet<Real>& probs,
                            const MeasurementStrength<Real>& strength,
                            Real eps = kProbabilityFloor<Real>) {
  detail::check_floor(probs, eps);
  const Real l = strength.lambda();
  const Real s = probs.s;
  const Real l2 = l * l;
  Matrix3<Real> f = Matrix3<Real>::Zero();
  f(0, 0) = Real(1) / probs(0, 0) + Real(1) / probs(0, 1) +
            Real(4) * l2 / s * (Real(1) / probs(1, 1) + Real(1) / probs(2, 1)) -
            Real(8) * l2 / (s * s);
  for (int t = 1; t <= 2; ++t) {
    f(0, t) = f(t, 0) = -Real(2) * l / (s * probs(t, 1));
    f(t, t) = (Real(1) / probs(t, 0) + Real(1) / probs(t, 1)) / s;
  }
  return f;
}

/// Tr(Q F^-1) with F inverted by adjugate.
template <typename Real>
CrbReport<Real> crb_numeric(const ProbabilitySet<Real>& probs,
                            const MeasurementStrength<Real>& strength) {
  const Matrix3<Real> q = q_matrix(strength);
  const Matrix3<Real> f = fisher_matrix(probs, strength);
  const Inverse3<Real> inv = adjugate_inverse(f);
  if (!(std::abs(inv.determinant) >= Real(1e-300))) {
    throw IllConditioned("Fisher matrix determinant underflows");
  }
  return {q, f, (q * inv.inverse).trace(), CrbMethod::NumericInversion};
}

/// Closed-form Tr(Q F^-1). Needs no division by probabilities, so it stays
/// finite for states aligned with a basis vector.
template <typename Real>
CrbReport<Real> crb_closed(const ProbabilitySet<Real>& probs,
                           const MeasurementStrength<Real>& strength) {
  const Real l = strength.lambda();
  const Matrix3<Real> q = q_matrix(strength);
  const Real l2 = l * l;
  const Real s = probs.s;
  const Real z = probs(0, 0) * probs(0, 1);
  const Real pair = probs(1, 0) * probs(1, 1) + probs(2, 0) * probs(2, 1);
  const Real bound = Real(2) / (Real(1) - l2) *
                     ((Real(1) + l2) * z + pair - Real(4) * l2 / (s * s) * z * pair);

  std::optional<Matrix3<Real>> f;
  if ((probs.p.array() >= kProbabilityFloor<Real>).all()) f = fisher_matrix(probs, strength);
  return {q, f, bound, CrbMethod::ClosedForm};
}

/// Closed-form bound for a pure state with x = |<0|psi>|^2.
template <typename Real>
Real pure_crb(Real x, const MeasurementStrength<Real>& strength) {
  const Real l = strength.lambda();
  detail::check_lambda_open(l);
  const Real s = s_value(x, strength);
  const Real w = x * (Real(1) - x);
  return s * s / (Real(1) - l * l) + Real(8) * l * l * w * w / (s * s);
}

/// Average of pure_crb over Haar-random pure states (x uniform on [0, 1]).
template <typename Real>
Real pure_average(const MeasurementStrength<Real>& strength) {
  const Real l = strength.lambda();
  detail::check_lambda_open(l);
  if (l == Real(0)) return Real(1);
  const Real l2 = l * l;
  if (l < Real(1e-2)) {
    // The closed form cancels catastrophically near zero.
    return Real(1) +
           l2 * (Real(8) / Real(5) +
                 l2 * (Real(152) / Real(105) + l2 * (Real(88) / Real(63) + l2 * Real(136) / Real(99))));
  }
  const Real artanh = std::atanh(l);
  return (Real(3) + l2) / (Real(3) * (Real(1) - l2)) +
         Real(2) * (Real(3) - Real(2) * l2) / (Real(3) * l2) -
         Real(2) * (Real(1) - l2) / (l2 * l) * artanh;
}

// SIC-POVM baseline --------------------------------------------------------

template <typename Real = double>
struct SicFrame {
  std::array<Vector3<Real>, 4> directions;
  std::array<Density<Real>, 4> projectors;
};

/// Regular tetrahedron frame; the four projectors sum to 2 I.
template <typename Real = double>
SicFrame<Real> sic_frame() {
  const Real r = Real(1) / std::sqrt(Real(3));
  SicFrame<Real> frame;
  frame.directions = {Vector3<Real>(r, r, r), Vector3<Real>(r, -r, -r),
                      Vector3<Real>(-r, r, -r), Vector3<Real>(-r, -r, r)};
  for (int k = 0; k < 4; ++k) {
    // Built directly: density_from_bloch would reject radius 1 + ulp.
    const Vector3<Real>& n = frame.directions[k];
    frame.projectors[k] = (Density<Real>::Identity() + n(0) * pauli_x<Real>() +
                           n(1) * pauli_y<Real>() + n(2) * pauli_z<Real>()) /
                          Real(2);
  }
  return frame;
}

template <typename Real = double>
using SicProbabilities = Eigen::Matrix<Real, 4, 1>;

/// p_k = Tr(rho Pi_k) / 2.
template <typename Real>
SicProbabilities<Real> sic_probabilities(const Density<Real>& rho) {
  check_density(rho);
  const SicFrame<Real> frame = sic_frame<Real>();
  SicProbabilities<Real> p;
  for (int k = 0; k < 4; ++k) p(k) = (rho * frame.projectors[k]).trace().real() / Real(2);
  return p;
}

/// rho = 3 sum_k p_k Pi_k - I.
template <typename Real>
Density<Real> sic_reconstruct(const SicProbabilities<Real>& p) {
  const SicFrame<Real> frame = sic_frame<Real>();
  Density<Real> rho = -Density<Real>::Identity();
  for (int k = 0; k < 4; ++k) rho += Real(3) * p(k) * frame.projectors[k];
  return rho;
}

template <typename Real>
Matrix3<Real> sic_q_matrix() {
  return Real(6) * (Matrix3<Real>::Identity() + Matrix3<Real>::Ones());
}

template <typename Real>
Matrix3<Real> sic_fisher_matrix(const SicProbabilities<Real>& p,
                                Real eps = kProbabilityFloor<Real>) {
  for (int k = 0; k < 4; ++k) {
    if (!(p(k) >= eps)) {
      std::ostringstream os;
      os << "SIC probability p" << k + 1 << " = " << p(k) << " is below the Fisher floor";
      throw SingularFisher(os.str());
    }
  }
  Matrix3<Real> f = Matrix3<Real>::Constant(Real(1) / p(3));
  for (int k = 0; k < 3; ++k) f(k, k) += Real(1) / p(k);
  return f;
}

template <typename Real>
Real sic_crb(const SicProbabilities<Real>& p) {
  const Inverse3<Real> inv = adjugate_inverse(sic_fisher_matrix(p));
  if (!(std::abs(inv.determinant) >= Real(1e-300))) {
    throw IllConditioned("SIC Fisher matrix determinant underflows");
  }
  return (sic_q_matrix<Real>() * inv.inverse).trace();
}

template <typename Real>
Real sic_crb(const Density<Real>& rho) {
  return sic_crb(sic_probabilities(rho));
}

}  // namespace dsttomo
