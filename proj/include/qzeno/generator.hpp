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

#include "qzeno/algebra.hpp"
#include "qzeno/matrix_functions.hpp"

namespace qzeno {

struct SystemParams {
  double omega = 0.0;  // coefficient of -i*omega[sigma_z, .]  (rad/time)
  double gamma = 0.0;  // spontaneous decay rate               (1/time)
  double kappa = 0.0;  // dephasing rate                       (1/time)
  double tau = 0.0;    // time-fluctuation scale               (time)

  void validate() const {
    if (!std::isfinite(omega) || !std::isfinite(gamma) || !std::isfinite(kappa) ||
        !std::isfinite(tau)) {
      throw std::invalid_argument("SystemParams: parameters must be finite");
    }
    if (gamma < 0.0) throw std::invalid_argument("SystemParams: gamma must be >= 0");
    if (kappa < 0.0) throw std::invalid_argument("SystemParams: kappa must be >= 0");
    if (tau < 0.0) throw std::invalid_argument("SystemParams: tau must be >= 0");
  }
};

// Master-equation generator G with rho' = G rho, stored as a superoperator
// acting on vec(rho). The params member records how the matrix was built.
struct Generator {
  Matrix4c matrix;
  SystemParams params;
};

// G rho = -i*omega [sigma_z, rho]
//         + (gamma/2)(2 sigma rho sigma^+ - sigma^+ sigma rho - rho sigma^+ sigma)
//         - kappa [sigma_z, [sigma_z, rho]]
inline Generator build_generator(const SystemParams& params) {
  params.validate();
  const AtomicOperators ops = atomic_operators();
  const Matrix2c number = ops.sigma_dagger * ops.sigma;

  const Matrix4c hamiltonian =
      Complex(0, -params.omega) * (left_mul(ops.sigma_z) - right_mul(ops.sigma_z));
  const Matrix4c decay =
      0.5 * params.gamma *
      (2.0 * left_mul(ops.sigma) * right_mul(ops.sigma_dagger) -
       left_mul(number) - right_mul(number));
  const Matrix4c dephasing =
      -params.kappa *
      (left_mul(ops.sigma_z * ops.sigma_z) -
       2.0 * left_mul(ops.sigma_z) * right_mul(ops.sigma_z) +
       right_mul(ops.sigma_z * ops.sigma_z));

  return Generator{hamiltonian + decay + dephasing, params};
}

inline DensityMatrix propagate_exact(const Generator& g, const DensityMatrix& rho0,
                                     double t) {
  if (t < 0.0) throw std::invalid_argument("propagate_exact: t must be >= 0");
  const Vector4c evolved = mat_exp(t * g.matrix) * vec(rho0.matrix());
  return DensityMatrix(unvec(evolved));
}

// Population inversion <sigma_z>(t) under plain exponential decay.
inline double analytic_inversion(double s0, double gamma, double t) {
  if (std::abs(s0) > 1.0) {
    throw std::invalid_argument("analytic_inversion: |s0| must be <= 1");
  }
  if (t < 0.0) throw std::invalid_argument("analytic_inversion: t must be >= 0");
  const double decay = std::exp(-gamma * t);
  return s0 * decay + (decay - 1.0);
}

// Coherence <e|rho|g>(t) under the literal generator above: it rotates at 2*omega
// and dephases at gamma/2 + 4*kappa.
inline Complex analytic_coherence(Complex c0, const SystemParams& params, double t) {
  if (t < 0.0) throw std::invalid_argument("analytic_coherence: t must be >= 0");
  const Complex exponent(-(0.5 * params.gamma + 4.0 * params.kappa) * t,
                         -2.0 * params.omega * t);
  return c0 * std::exp(exponent);
}

}  // namespace qzeno
