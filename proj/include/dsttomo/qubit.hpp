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
 * Fixed-size complex linear algebra for a single qubit: kets, 2x2 density
 * matrices, the 4x4 system-pointer unitary and the 3x3 real matrices that
 * carry cost and Fisher information.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <utility>

#include "dsttomo/errors.hpp"

namespace dsttomo {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using Ket = Eigen::Matrix<std::complex<Real>, 2, 1>;
template <typename Real>
using Density = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real>
using Unitary4 = Eigen::Matrix<std::complex<Real>, 4, 4>;
template <typename Real>
using Ket4 = Eigen::Matrix<std::complex<Real>, 4, 1>;
template <typename Real>
using Matrix3 = Eigen::Matrix<Real, 3, 3>;
template <typename Real>
using Vector3 = Eigen::Matrix<Real, 3, 1>;

template <typename Real>
struct Tolerance {
  static constexpr Real kHermitian = Real(1e-12);
  static constexpr Real kTrace = Real(1e-12);
  static constexpr Real kNorm = Real(1e-12);
  /// Lowest eigenvalue still accepted as positive semidefinite.
  static constexpr Real kPsd = Real(-1e-9);
  static constexpr Real kBlochRadius = Real(1e-12);
};

template <typename Real = double>
Density<Real> pauli_x() {
  Density<Real> m;
  m << Real(0), Real(1), Real(1), Real(0);
  return m;
}

template <typename Real = double>
Density<Real> pauli_y() {
  Density<Real> m;
  m << Real(0), Complex<Real>(0, -1), Complex<Real>(0, 1), Real(0);
  return m;
}

template <typename Real = double>
Density<Real> pauli_z() {
  Density<Real> m;
  m << Real(1), Real(0), Real(0), Real(-1);
  return m;
}

template <typename Real>
Ket<Real> basis_ket(int index) {
  Ket<Real> v = Ket<Real>::Zero();
  v(index) = Real(1);
  return v;
}

template <typename Real>
Density<Real> projector(const Ket<Real>& v) {
  return v * v.adjoint();
}

/// Multiplies by a global phase so that the first nonzero amplitude is real
/// and nonnegative.
template <typename Real>
Ket<Real> fix_global_phase(const Ket<Real>& v) {
  constexpr Real kZero = Real(1e-14);
  for (int i = 0; i < 2; ++i) {
    const Real mag = std::abs(v(i));
    if (mag > kZero) {
      Ket<Real> out = v * (std::conj(v(i)) / mag);
      out(i) = Complex<Real>(std::abs(out(i)), Real(0));
      return out;
    }
  }
  return v;
}

template <typename Real>
bool is_hermitian(const Density<Real>& m, Real tol = Tolerance<Real>::kHermitian) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Eigenvalues of a Hermitian 2x2 matrix, largest first.
template <typename Real>
std::pair<Real, Real> hermitian_eigenvalues(const Density<Real>& m) {
  const Real a = m(0, 0).real();
  const Real d = m(1, 1).real();
  const Real mean = (a + d) / Real(2);
  const Real radius = std::hypot((a - d) / Real(2), std::abs(m(0, 1)));
  return {mean + radius, mean - radius};
}

/// Throws InvalidState unless `m` is Hermitian with unit trace and, when
/// `require_psd`, has no eigenvalue below the PSD tolerance.
template <typename Real>
void check_density(const Density<Real>& m, bool require_psd = true) {
  if (!m.allFinite()) throw InvalidState("density matrix has non-finite entries");
  if (!is_hermitian(m)) throw InvalidState("density matrix is not Hermitian");
  const Complex<Real> tr = m.trace();
  if (std::abs(tr - Complex<Real>(1)) > Tolerance<Real>::kTrace) {
    std::ostringstream os;
    os << "density matrix trace " << tr.real() << " differs from 1";
    throw InvalidState(os.str());
  }
  if (require_psd) {
    const Real low = hermitian_eigenvalues(m).second;
    if (low < Tolerance<Real>::kPsd) {
      std::ostringstream os;
      os << "density matrix has negative eigenvalue " << low;
      throw InvalidState(os.str());
    }
  }
}

template <typename Real>
bool is_density(const Density<Real>& m, bool require_psd = true) {
  try {
    check_density(m, require_psd);
    return true;
  } catch (const InvalidState&) {
    return false;
  }
}

/// rho = (I + b.sigma) / 2.
template <typename Real>
Density<Real> density_from_bloch(const Vector3<Real>& b) {
  if (!b.allFinite() || b.norm() > Real(1) + Tolerance<Real>::kBlochRadius) {
    std::ostringstream os;
    os << "Bloch vector of length " << b.norm() << " lies outside the unit ball";
    throw BlochOutOfBall(os.str());
  }
  Density<Real> rho = Density<Real>::Identity();
  rho += b(0) * pauli_x<Real>() + b(1) * pauli_y<Real>() + b(2) * pauli_z<Real>();
  return rho / Real(2);
}

/// b_i = Tr[rho sigma_i].
template <typename Real>
Vector3<Real> bloch_vector(const Density<Real>& rho) {
  return Vector3<Real>(Real(2) * rho(0, 1).real(), -Real(2) * rho(0, 1).imag(),
                       (rho(0, 0) - rho(1, 1)).real());
}

/// Tr[(a - b)^2] for Hermitian a, b; equals the squared Frobenius norm of the
/// difference.
template <typename Real>
Real hs_distance_sq(const Density<Real>& a, const Density<Real>& b) {
  return (a - b).squaredNorm();
}

template <typename Real>
struct Spectrum {
  /// Eigenvalue attached to `v0`; the larger of the two.
  Real weight;
  Ket<Real> v0;
  Ket<Real> v1;
};

/// Closed-form eigendecomposition rho = x v0 v0^+ + (1 - x) v1 v1^+, with
/// eigenvectors phase-fixed.
template <typename Real>
Spectrum<Real> spectral_decompose(const Density<Real>& rho) {
  const Real high = hermitian_eigenvalues(rho).first;
  const Real a = rho(0, 0).real();
  const Real d = rho(1, 1).real();
  const Complex<Real> c = rho(0, 1);

  // (H - high) v = 0 has the two candidate solutions below; take the better
  // conditioned one.
  Ket<Real> first(c, Complex<Real>(high - a));
  Ket<Real> second(Complex<Real>(high - d), std::conj(c));
  Ket<Real> v0 = first.squaredNorm() >= second.squaredNorm() ? first : second;
  const Real n = v0.norm();
  if (n <= std::numeric_limits<Real>::min() * Real(1e4)) {
    // Degenerate spectrum (proportional to the identity).
    v0 = basis_ket<Real>(0);
  } else {
    v0 /= n;
  }
  v0 = fix_global_phase(v0);
  Ket<Real> v1(-std::conj(v0(1)), std::conj(v0(0)));
  v1 = fix_global_phase(v1);

  return {high, v0, v1};
}

template <typename Real>
Density<Real> reassemble(const Spectrum<Real>& s) {
  return s.weight * projector(s.v0) + (Real(1) - s.weight) * projector(s.v1);
}

/// U(theta) = exp(-i theta sigma_x (x) sigma_x) = cos(theta) I - i sin(theta)
/// sigma_x (x) sigma_x, system as the left tensor factor.
template <typename Real>
Unitary4<Real> coupling_unitary(Real theta) {
  Density<Real> sx = pauli_x<Real>();
  Unitary4<Real> xx;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) xx.template block<2, 2>(2 * i, 2 * j) = sx(i, j) * sx;
  return std::cos(theta) * Unitary4<Real>::Identity() -
         Complex<Real>(0, std::sin(theta)) * xx;
}

template <typename Real>
Ket4<Real> tensor(const Ket<Real>& system, const Ket<Real>& pointer) {
  Ket4<Real> out;
  for (int i = 0; i < 2; ++i) out.template segment<2>(2 * i) = system(i) * pointer;
  return out;
}

template <typename Real>
struct Inverse3 {
  Matrix3<Real> inverse;
  Real determinant;
};

/// Inverse by adjugate over determinant; no pivoting.
template <typename Real>
Inverse3<Real> adjugate_inverse(const Matrix3<Real>& m) {
  Matrix3<Real> adj;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      adj(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    }
  }
  const Real det = m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
  return {adj / det, det};
}

}  // namespace dsttomo
