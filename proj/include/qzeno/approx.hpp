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
#include <limits>
#include <stdexcept>
#include <vector>

#include "qzeno/algebra.hpp"
#include "qzeno/generator.hpp"

namespace qzeno {

struct TimeGrid {
  double t_max;
  int steps;

  TimeGrid(double t_max_, int steps_) : t_max(t_max_), steps(steps_) {
    if (t_max <= 0.0) throw std::invalid_argument("TimeGrid: t_max must be > 0");
    if (steps < 2) throw std::invalid_argument("TimeGrid: steps must be >= 2");
  }

  double spacing() const { return t_max / (steps - 1); }
  double time(int i) const { return i == steps - 1 ? t_max : i * spacing(); }
};

// Per-state validity diagnostics, recorded as computed; states are never
// projected back onto the physical set.
struct StateDiagnostics {
  double trace_defect = 0.0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<BlochVector> bloch;
  std::vector<double> purity;
  std::vector<StateDiagnostics> diagnostics;
};

// Small-tau expansion of the averaged dynamics: the surviving second-order
// term acts as extra dephasing at rate tau*omega^2/2.
inline Generator build_approx_generator(double omega, double gamma, double tau) {
  if (tau < 0.0) {
    throw std::invalid_argument("build_approx_generator: tau must be >= 0");
  }
  SystemParams params;
  params.omega = omega;
  params.gamma = gamma;
  params.kappa = 0.5 * tau * omega * omega;
  params.tau = tau;
  return build_generator(params);
}

// Classic fixed-step RK4 on the vectorized state. Linear problems this small
// want determinism and a testable convergence order more than adaptivity.
inline Trajectory integrate_linear_ode(const Matrix4c& m, const DensityMatrix& rho0,
                                       const TimeGrid& grid) {
  const double h = grid.spacing();
  Trajectory traj;
  traj.times.reserve(grid.steps);
  traj.states.reserve(grid.steps);
  traj.bloch.reserve(grid.steps);
  traj.purity.reserve(grid.steps);
  traj.diagnostics.reserve(grid.steps);

  // Wide enough for the permitted trace drift; actual defects are recorded.
  const ValidityLimits ode_limits{1e-8, 1e-8, -1e-6};

  Vector4c y = vec(rho0.matrix());
  for (int i = 0; i < grid.steps; ++i) {
    if (i > 0) {
      const Vector4c k1 = m * y;
      const Vector4c k2 = m * (y + 0.5 * h * k1);
      const Vector4c k3 = m * (y + 0.5 * h * k2);
      const Vector4c k4 = m * (y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const Matrix2c raw = unvec(y);
    if (std::abs(raw.trace() - Complex(1, 0)) > ode_limits.trace_tol) {
      throw std::runtime_error(
          "integrate_linear_ode: trace drift exceeds 1e-8; reduce the step size");
    }
    DensityMatrix state(raw, ode_limits);
    StateDiagnostics diag;
    diag.trace_defect = state.trace_defect();
    diag.hermiticity_defect = state.hermiticity_defect();
    diag.min_eigenvalue = state.min_eigenvalue();
    traj.times.push_back(grid.time(i));
    traj.bloch.push_back(state.bloch());
    traj.purity.push_back(state.purity());
    traj.diagnostics.push_back(diag);
    traj.states.push_back(std::move(state));
  }
  return traj;
}

struct RegimeThresholds {
  double gamma_tau_max = 0.01;
  double omega_tau_max = 0.1;
  double zeno_gamma_tau_min = 1.0;
};

struct RegimeReport {
  double gamma_tau = 0.0;
  double omega_tau = 0.0;
  double omega_over_gamma = 0.0;
  bool small_tau_valid = false;
  bool zeno_regime = false;
};

inline RegimeReport regime_report(const SystemParams& params,
                                  const RegimeThresholds& thresholds = {}) {
  params.validate();
  RegimeReport report;
  report.gamma_tau = params.gamma * params.tau;
  report.omega_tau = params.omega * params.tau;
  report.omega_over_gamma = params.gamma > 0.0
                                ? params.omega / params.gamma
                                : std::numeric_limits<double>::infinity();
  report.small_tau_valid = report.gamma_tau <= thresholds.gamma_tau_max &&
                           std::abs(report.omega_tau) <= thresholds.omega_tau_max;
  report.zeno_regime = report.gamma_tau >= thresholds.zeno_gamma_tau_min;
  return report;
}

}  // namespace qzeno
