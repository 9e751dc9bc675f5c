// Copyright 2026 The qzeno Authors
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

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qzeno {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// Basis convention: |g> = index 0, |e> = index 1.
// Vectorization is column-stacking, so vec(rho) = (rho_gg, rho_eg, rho_ge, rho_ee).

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

inline Vector4c vec(const Matrix2c& rho) {
  return Eigen::Map<const Vector4c>(rho.data());
}

inline Matrix2c unvec(const Vector4c& v) {
  return Eigen::Map<const Matrix2c>(v.data());
}

// Superoperators for left/right multiplication: vec(A rho B) = kron(B^T, A) vec(rho).
inline Matrix4c left_mul(const Matrix2c& a) {
  return kron(Matrix2c::Identity(), a);
}

inline Matrix4c right_mul(const Matrix2c& b) {
  return kron(b.transpose(), Matrix2c::Identity());
}

inline Matrix2c commutator(const Matrix2c& a, const Matrix2c& b) {
  return a * b - b * a;
}

struct AtomicOperators {
  Matrix2c sigma;         // lowering operator |g><e|
  Matrix2c sigma_dagger;  // raising operator |e><g|
  Matrix2c sigma_z;       // inversion, diag(-1, +1)
  Matrix2c sigma_x;
  Matrix2c sigma_y;
};

inline AtomicOperators atomic_operators() {
  AtomicOperators ops;
  ops.sigma << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  ops.sigma_dagger = ops.sigma.adjoint();
  ops.sigma_z = ops.sigma_dagger * ops.sigma - ops.sigma * ops.sigma_dagger;
  ops.sigma_x = ops.sigma + ops.sigma_dagger;
  ops.sigma_y = Complex(0, 1) * ops.sigma - Complex(0, 1) * ops.sigma_dagger;
  return ops;
}

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// Construction tolerances for DensityMatrix. The defaults are the library-wide
// state-validity contract; the ODE integrator relaxes them to its own drift
// budget and reports exact defects separately.
struct ValidityLimits {
  double hermiticity_tol = 1e-12;
  double trace_tol = 1e-12;
  double eigenvalue_floor = -1e-10;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix2c& m, const ValidityLimits& limits = {})
      : matrix_(m) {
    const double herm = hermiticity_defect();
    if (herm > limits.hermiticity_tol) {
      throw std::invalid_argument(
          "DensityMatrix: Hermiticity defect " + std::to_string(herm) +
          " exceeds tolerance");
    }
    const double tdef = trace_defect();
    if (tdef > limits.trace_tol) {
      throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                  std::to_string(tdef));
    }
    const double lo = min_eigenvalue();
    if (lo < limits.eigenvalue_floor) {
      throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                  std::to_string(lo));
    }
  }

  const Matrix2c& matrix() const { return matrix_; }

  double hermiticity_defect() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  }

  double trace_defect() const { return std::abs(matrix_.trace() - Complex(1, 0)); }

  // Eigenvalues of the Hermitian part, in closed form for the 2x2 case.
  double min_eigenvalue() const {
    const Matrix2c h = 0.5 * (matrix_ + matrix_.adjoint());
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double off = std::abs(h(0, 1));
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + off * off);
    return mid - rad;
  }

  BlochVector bloch() const {
    BlochVector b;
    const Complex eg = matrix_(1, 0);
    b.x = 2.0 * eg.real();
    b.y = -2.0 * eg.imag();
    b.z = (matrix_(1, 1) - matrix_(0, 0)).real();
    return b;
  }

  double purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  Matrix2c matrix_;
};

inline Complex expectation(const DensityMatrix& rho, const Matrix2c& a) {
  return (rho.matrix() * a).trace();
}

struct StateSpec {
  enum class Kind { Excited, Ground, Mixed, Bloch };

  Kind kind = Kind::Excited;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static StateSpec excited() { return {Kind::Excited, 0, 0, 1}; }
  static StateSpec ground() { return {Kind::Ground, 0, 0, -1}; }
  static StateSpec mixed() { return {Kind::Mixed, 0, 0, 0}; }
  static StateSpec bloch(double x, double y, double z) {
    return {Kind::Bloch, x, y, z};
  }
};

inline DensityMatrix state_from_spec(const StateSpec& spec) {
  const double r2 = spec.x * spec.x + spec.y * spec.y + spec.z * spec.z;
  if (spec.kind == StateSpec::Kind::Bloch && r2 > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "state_from_spec: Bloch vector outside the unit ball");
  }
  Matrix2c m;
  m(0, 0) = Complex(0.5 * (1.0 - spec.z), 0.0);
  m(1, 1) = Complex(0.5 * (1.0 + spec.z), 0.0);
  m(1, 0) = Complex(0.5 * spec.x, -0.5 * spec.y);
  m(0, 1) = std::conj(m(1, 0));
  return DensityMatrix(m);
}

}  // namespace qzeno
