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

#include <Eigen/Dense>

#include "qzeno/algebra.hpp"
#include "qzeno/generator.hpp"
#include "qzeno/matrix_functions.hpp"

namespace qzeno {

// The Gamma-averaged evolution map V(t) = (I - tau*G)^{-t/tau} together with
// the generator K = -(1/tau) Log(I - tau*G) of the equivalent semigroup.
struct AveragedEvolution {
  Matrix4c v_matrix;
  Matrix4c log_generator;
  SystemParams params;
  double t = 0.0;
};

inline AveragedEvolution build_v_map(const Generator& g, double tau, double t) {
  if (tau <= 0.0) throw std::invalid_argument("build_v_map: tau must be > 0");
  if (t < 0.0) throw std::invalid_argument("build_v_map: t must be >= 0");
  const Matrix4c base = Matrix4c::Identity() - tau * g.matrix;
  AveragedEvolution ev;
  ev.v_matrix = mat_power(base, -t / tau);
  ev.log_generator = -mat_log_principal(base) / tau;
  ev.params = g.params;
  ev.params.tau = tau;
  ev.t = t;
  return ev;
}

inline DensityMatrix averaged_state_matrixfn(const AveragedEvolution& ev,
                                             const DensityMatrix& rho0) {
  return DensityMatrix(unvec(ev.v_matrix * vec(rho0.matrix())));
}

// Closed-form averaged inversion: s0 (1+g*tau)^{-t/tau} + [(1+g*tau)^{-t/tau} - 1].
// tau = 0 is the deterministic limit, plain exponential decay.
inline double averaged_inversion_closed(double s0, double gamma, double tau,
                                        double t) {
  if (std::abs(s0) > 1.0) {
    throw std::invalid_argument("averaged_inversion_closed: |s0| must be <= 1");
  }
  if (gamma < 0.0 || tau < 0.0 || t < 0.0) {
    throw std::invalid_argument(
        "averaged_inversion_closed: gamma, tau, t must be >= 0");
  }
  if (tau == 0.0) return analytic_inversion(s0, gamma, t);
  const double power = std::exp(-(t / tau) * std::log1p(gamma * tau));
  return s0 * power + (power - 1.0);
}

// Decay rate of the averaged populations; always below the bare gamma for
// tau > 0, which is the freezing effect.
inline double effective_decay_rate(double gamma, double tau) {
  if (gamma < 0.0 || tau < 0.0) {
    throw std::invalid_argument("effective_decay_rate: gamma, tau must be >= 0");
  }
  if (tau == 0.0) return gamma;
  return std::log1p(gamma * tau) / tau;
}

// Averaging a bare oscillation e^{-i w t} turns it into decay at kappa_nm plus
// a slowed oscillation at nu_nm.
inline double kappa_nm(double omega_nm, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("kappa_nm: tau must be > 0");
  return std::log1p(omega_nm * omega_nm * tau * tau) / (2.0 * tau);
}

inline double nu_nm(double omega_nm, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("nu_nm: tau must be > 0");
  return std::atan(omega_nm * tau) / tau;
}

inline Complex hamiltonian_only_element(Complex rho0_nm, double omega_nm,
                                        double tau, double t) {
  if (tau < 0.0 || t < 0.0) {
    throw std::invalid_argument(
        "hamiltonian_only_element: tau and t must be >= 0");
  }
  if (tau == 0.0) {
    return rho0_nm * std::exp(Complex(0.0, -omega_nm * t));
  }
  const Complex exponent(-kappa_nm(omega_nm, tau) * t, -nu_nm(omega_nm, tau) * t);
  return rho0_nm * std::exp(exponent);
}

// Choi matrix of the map: apply V(t) to each matrix unit E_ij and assemble
// sum_ij E_ij (x) V(E_ij). Complete positivity is equivalent to this matrix
// being positive semidefinite.
inline Matrix4c choi_matrix(const AveragedEvolution& ev) {
  Matrix4c choi = Matrix4c::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix2c unit = Matrix2c::Zero();
      unit(i, j) = Complex(1.0, 0.0);
      const Matrix2c mapped = unvec(ev.v_matrix * vec(unit));
      choi += kron(unit, mapped);
    }
  }
  return choi;
}

struct CpReport {
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
};

inline CpReport is_completely_positive(const AveragedEvolution& ev) {
  const Matrix4c choi = choi_matrix(ev);
  const Matrix4c herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("is_completely_positive: eigensolve failed");
  }
  CpReport report;
  report.min_eigenvalue = solver.eigenvalues()(0);
  report.completely_positive = report.min_eigenvalue >= -1e-12;
  return report;
}

}  // namespace qzeno
