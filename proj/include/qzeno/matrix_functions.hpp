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
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "qzeno/algebra.hpp"

namespace qzeno {

// Eigenvector-matrix condition number above which the spectral route is
// abandoned in favour of a squaring-based fallback.
inline constexpr double kEigenvectorConditionLimit = 1e8;

struct Eigensystem {
  Vector4c values;
  Matrix4c vectors;
  double condition = 0.0;
};

inline Eigensystem eigensystem(const Matrix4c& a) {
  Eigen::ComplexEigenSolver<Matrix4c> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensystem: eigendecomposition failed");
  }
  Eigensystem es;
  es.values = solver.eigenvalues();
  es.vectors = solver.eigenvectors();
  Eigen::JacobiSVD<Matrix4c> svd(es.vectors);
  const double smin = svd.singularValues()(3);
  es.condition = smin > 0.0 ? svd.singularValues()(0) / smin
                            : std::numeric_limits<double>::infinity();
  return es;
}

namespace detail {

inline Matrix4c apply_spectral(const Eigensystem& es,
                               Complex (*f)(const Complex&)) {
  Vector4c fv;
  for (int i = 0; i < 4; ++i) fv(i) = f(es.values(i));
  return es.vectors * fv.asDiagonal() *
         es.vectors.colPivHouseholderQr().solve(Matrix4c::Identity());
}

// Scaling-and-squaring Taylor exponential; accurate for the scaled norm <= 1/2.
inline Matrix4c exp_squaring(const Matrix4c& a) {
  const double norm = a.cwiseAbs().sum();
  int squarings = 0;
  Matrix4c b = a;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    b = a / std::pow(2.0, squarings);
  }
  Matrix4c term = Matrix4c::Identity();
  Matrix4c sum = term;
  bool converged = false;
  for (int k = 1; k <= 40; ++k) {
    term = (term * b) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * sum.cwiseAbs().maxCoeff()) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error("mat_exp: Taylor series did not converge");
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Principal square root by the Denman-Beavers iteration.
inline Matrix4c sqrt_denman_beavers(const Matrix4c& a) {
  Matrix4c y = a;
  Matrix4c z = Matrix4c::Identity();
  for (int it = 0; it < 60; ++it) {
    const Matrix4c yn = 0.5 * (y + z.inverse());
    const Matrix4c zn = 0.5 * (z + y.inverse());
    const double step = (yn - y).cwiseAbs().maxCoeff();
    y = yn;
    z = zn;
    if (step <= 1e-15 * y.cwiseAbs().maxCoeff()) return y;
  }
  throw std::runtime_error(
      "mat_log_principal: square-root iteration did not converge");
}

// Inverse scaling-and-squaring: take square roots until close to the
// identity, expand log(I + X) as a series, and undo the scaling.
inline Matrix4c log_squaring(const Matrix4c& a) {
  Matrix4c b = a;
  int roots = 0;
  while ((b - Matrix4c::Identity()).cwiseAbs().maxCoeff() > 0.25) {
    if (roots >= 40) {
      throw std::runtime_error(
          "mat_log_principal: inverse scaling did not converge");
    }
    b = sqrt_denman_beavers(b);
    ++roots;
  }
  const Matrix4c x = b - Matrix4c::Identity();
  Matrix4c power = x;
  Matrix4c sum = x;
  for (int k = 2; k <= 80; ++k) {
    power = power * x;
    const Matrix4c term = power * (((k % 2) ? 1.0 : -1.0) / k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18) break;
  }
  return std::pow(2.0, roots) * sum;
}

inline void check_log_branch(const Vector4c& eigenvalues, double scale) {
  const double axis_tol = 1e-14 * std::max(1.0, scale);
  for (int i = 0; i < 4; ++i) {
    const Complex lam = eigenvalues(i);
    if (lam.real() <= 0.0 && std::abs(lam.imag()) <= axis_tol) {
      throw std::domain_error(
          "mat_log_principal: eigenvalue on the closed negative real axis");
    }
  }
}

}  // namespace detail

inline Matrix4c mat_exp(const Matrix4c& a) {
  const Eigensystem es = eigensystem(a);
  if (es.condition > kEigenvectorConditionLimit) {
    return detail::exp_squaring(a);
  }
  return detail::apply_spectral(es, +[](const Complex& z) { return std::exp(z); });
}

inline Matrix4c mat_log_principal(const Matrix4c& a) {
  const Eigensystem es = eigensystem(a);
  detail::check_log_branch(es.values, a.cwiseAbs().maxCoeff());
  if (es.condition > kEigenvectorConditionLimit) {
    return detail::log_squaring(a);
  }
  return detail::apply_spectral(es, +[](const Complex& z) { return std::log(z); });
}

inline Matrix4c mat_power(const Matrix4c& a, double p) {
  if (p == 0.0) return Matrix4c::Identity();
  if (p == 1.0) return a;
  return mat_exp(p * mat_log_principal(a));
}

}  // namespace qzeno
