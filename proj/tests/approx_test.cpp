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

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace qzeno;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("time grid covers [0, t_max] with an exact endpoint", "[approx]") {
  REQUIRE_THROWS_AS(TimeGrid(0.0, 10), std::invalid_argument);
  REQUIRE_THROWS_AS(TimeGrid(1.0, 1), std::invalid_argument);

  const TimeGrid grid(10.0, 500);
  REQUIRE(grid.time(0) == 0.0);
  REQUIRE(grid.time(499) == 10.0);
  REQUIRE_THAT(grid.spacing(), WithinRel(10.0 / 499.0, 1e-15));
  REQUIRE_THAT(grid.time(250), WithinRel(250 * 10.0 / 499.0, 1e-15));
}

TEST_CASE("small-tau generator reduces to extra dephasing", "[approx]") {
  SECTION("tau = 0 recovers the bare generator") {
    SystemParams bare;
    bare.omega = 2;
    bare.gamma = 1;
    bare.kappa = 0;
    bare.tau = 0;
    const Generator expected = build_generator(bare);
    const Generator got = build_approx_generator(2, 1, 0.0);
    REQUIRE(test::max_abs_diff(got.matrix, expected.matrix) == 0.0);
  }

  SECTION("the correction equals dephasing at rate tau omega^2 / 2") {
    const double omega = 2;
    const double gamma = 1;
    const double tau = 0.25;
    SystemParams equivalent;
    equivalent.omega = omega;
    equivalent.gamma = gamma;
    equivalent.kappa = 0.5 * tau * omega * omega;
    equivalent.tau = 0;
    const Generator expected = build_generator(equivalent);
    const Generator got = build_approx_generator(omega, gamma, tau);
    REQUIRE(test::max_abs_diff(got.matrix, expected.matrix) == 0.0);
  }

  SECTION("population dynamics are unchanged") {
    const Generator approx = build_approx_generator(3, 1, 0.1);
    const Generator bare = build_approx_generator(3, 1, 0.0);
    const Vector4c excited = vec(state_from_spec(StateSpec::excited()).matrix());
    REQUIRE(((approx.matrix - bare.matrix) * excited).cwiseAbs().maxCoeff() ==
            0.0);
  }

  SECTION("negative tau is rejected") {
    REQUIRE_THROWS_AS(build_approx_generator(1, 1, -0.1), std::invalid_argument);
  }
}

TEST_CASE("second-order expansion of the averaged generator", "[approx]") {
  // K = G + (tau/2) G_H^2 + O(tau^2) when only the Hamiltonian part matters at
  // second order. With dyadic parameters the identity is exact in floating
  // point, which pins the coefficient rather than just its magnitude.
  const double omega = 2;
  const double tau = 0.25;
  SystemParams bare;
  bare.omega = omega;
  bare.gamma = 1;
  bare.kappa = 0;
  bare.tau = 0;
  SystemParams hamiltonian_only;
  hamiltonian_only.omega = omega;
  hamiltonian_only.gamma = 0;
  hamiltonian_only.kappa = 0;
  hamiltonian_only.tau = 0;

  const Matrix4c g0 = build_generator(bare).matrix;
  const Matrix4c gh = build_generator(hamiltonian_only).matrix;
  const Matrix4c expansion = g0 + 0.5 * tau * gh * gh;
  const Matrix4c approx = build_approx_generator(omega, 1, tau).matrix;
  REQUIRE(test::max_abs_diff(approx, expansion) == 0.0);
}

TEST_CASE("fixed-step integrator basics", "[approx]") {
  SECTION("zero right-hand side holds the state constant") {
    const DensityMatrix rho0 = state_from_spec(StateSpec::bloch(0.2, 0.3, 0.4));
    const Trajectory traj =
        integrate_linear_ode(Matrix4c::Zero(), rho0, TimeGrid(5.0, 11));
    REQUIRE(traj.states.size() == 11);
    REQUIRE(traj.times.front() == 0.0);
    REQUIRE(traj.times.back() == 5.0);
    REQUIRE(test::max_abs_diff(traj.states.back().matrix(), rho0.matrix()) ==
            0.0);
  }

  SECTION("diagnostics are recorded for every step") {
    const Generator g = build_approx_generator(1, 1, 0.0);
    const Trajectory traj = integrate_linear_ode(
        g.matrix, state_from_spec(StateSpec::excited()), TimeGrid(2.0, 41));
    REQUIRE(traj.diagnostics.size() == 41);
    REQUIRE(traj.purity.size() == 41);
    REQUIRE(traj.bloch.size() == 41);
    for (const StateDiagnostics& d : traj.diagnostics) {
      REQUIRE(d.trace_defect <= 1e-12);
      REQUIRE(d.hermiticity_defect <= 1e-12);
      REQUIRE(d.min_eigenvalue >= -1e-10);
    }
    // Purity falls from 1 toward the mixed-state floor before repurifying.
    REQUIRE(traj.purity.front() == 1.0);
    REQUIRE(traj.purity[20] < 1.0);
  }

  SECTION("trace-violating dynamics are reported, not silently recorded") {
    Matrix4c bad = Matrix4c::Zero();
    bad(0, 0) = Complex(1.0, 0);
    bad(3, 3) = Complex(1.0, 0);
    REQUIRE_THROWS_WITH(
        integrate_linear_ode(bad, state_from_spec(StateSpec::excited()),
                             TimeGrid(1.0, 11)),
        ContainsSubstring("trace drift"));
  }
}

TEST_CASE("integrator converges at fourth order", "[approx]") {
  SystemParams params;
  params.omega = 1.5;
  params.gamma = 0.1;
  params.kappa = 0;
  params.tau = 0.05;
  const Generator g = build_generator(params);
  const Matrix4c k = build_v_map(g, params.tau, 1.0).log_generator;
  const DensityMatrix rho0 = state_from_spec(StateSpec::bloch(1, 0, 0));
  const double t_max = 10.0;

  const Matrix4c reference = build_v_map(g, params.tau, t_max).v_matrix;
  const Matrix2c exact = unvec(Vector4c(reference * vec(rho0.matrix())));

  auto endpoint_error = [&](int steps) {
    const Trajectory traj =
        integrate_linear_ode(k, rho0, TimeGrid(t_max, steps + 1));
    return test::max_abs_diff(traj.states.back().matrix(), exact);
  };

  const double coarse = endpoint_error(2000);
  const double fine = endpoint_error(4000);
  REQUIRE(coarse <= 1e-8);
  const double ratio = coarse / fine;
  REQUIRE(ratio >= 12.0);
  REQUIRE(ratio <= 20.0);
}

TEST_CASE("integrated flow matches the matrix-function route", "[approx]") {
  SystemParams params;
  params.omega = 1;
  params.gamma = 1;
  params.kappa = 0;
  params.tau = 0.2;
  const Generator g = build_generator(params);
  const AveragedEvolution ev = build_v_map(g, params.tau, 3.0);
  const DensityMatrix rho0 = state_from_spec(StateSpec::bloch(0.5, 0, 0.5));

  const Trajectory traj =
      integrate_linear_ode(ev.log_generator, rho0, TimeGrid(3.0, 3001));
  const DensityMatrix direct = averaged_state_matrixfn(ev, rho0);
  REQUIRE(test::max_abs_diff(traj.states.back().matrix(), direct.matrix()) <=
          1e-8);
}

TEST_CASE("regime classification", "[approx]") {
  SECTION("fast-oscillation small-tau point") {
    SystemParams params;
    params.omega = 100;
    params.gamma = 1;
    params.kappa = 0;
    params.tau = 0.001;
    const RegimeReport report = regime_report(params);
    REQUIRE_THAT(report.gamma_tau, WithinAbs(0.001, 1e-15));
    REQUIRE_THAT(report.omega_tau, WithinAbs(0.1, 1e-15));
    REQUIRE_THAT(report.omega_over_gamma, WithinAbs(100.0, 1e-12));
    REQUIRE(report.small_tau_valid);
    REQUIRE_FALSE(report.zeno_regime);
  }

  SECTION("long averaging time is the freezing regime") {
    SystemParams params;
    params.omega = 1;
    params.gamma = 1;
    params.kappa = 0;
    params.tau = 5;
    const RegimeReport report = regime_report(params);
    REQUIRE(report.zeno_regime);
    REQUIRE_FALSE(report.small_tau_valid);
  }

  SECTION("undamped system reports an infinite frequency ratio") {
    SystemParams params;
    params.omega = 2;
    params.gamma = 0;
    params.kappa = 0;
    params.tau = 0.01;
    REQUIRE(std::isinf(regime_report(params).omega_over_gamma));
  }
}

TEST_CASE("coherence decay rate of the small-tau generator", "[approx]") {
  // The approximate generator damps coherences at gamma/2 + 2 omega^2 tau,
  // the averaged map at (1/2tau) log[(1 + gamma tau/2)^2 + 4 omega^2 tau^2].
  const double gamma = 1.0;
  const double omega = 100.0;

  auto approx_rate = [&](double tau) { return gamma / 2 + 2 * omega * omega * tau; };
  auto averaged_rate = [&](double tau) {
    // (1 + gamma tau/2)^2 + 4 omega^2 tau^2 = 1 + x with the x below; log1p
    // keeps the rate accurate when tau is tiny and x approaches roundoff.
    const double x = gamma * tau + 0.25 * gamma * gamma * tau * tau +
                     4 * omega * omega * tau * tau;
    return std::log1p(x) / (2 * tau);
  };
  auto matrix_rate = [](const Matrix4c& m) {
    const Eigensystem es = eigensystem(m);
    // The coherence eigenvalue is the non-real pair; take its damping part.
    for (int i = 0; i < 4; ++i) {
      if (std::abs(es.values(i).imag()) > 1e-6) return -es.values(i).real();
    }
    return std::nan("");
  };

  SECTION("closed formulas match the generator spectra") {
    for (double tau : {1e-4, 1e-3}) {
      const Generator approx = build_approx_generator(omega, gamma, tau);
      REQUIRE_THAT(matrix_rate(approx.matrix),
                   WithinRel(approx_rate(tau), 1e-9));

      SystemParams bare;
      bare.omega = omega;
      bare.gamma = gamma;
      bare.kappa = 0;
      bare.tau = 0;
      const Matrix4c k =
          build_v_map(build_generator(bare), tau, 1.0).log_generator;
      REQUIRE_THAT(matrix_rate(k), WithinRel(averaged_rate(tau), 1e-9));
    }
  }

  SECTION("the rate gap follows its leading series") {
    for (double tau : {1e-4, 1e-3}) {
      const double gap = approx_rate(tau) - averaged_rate(tau);
      REQUIRE(gap > 0.0);
      const double model = gamma * gamma * tau / 8 +
                           2 * gamma * omega * omega * tau * tau +
                           4 * std::pow(omega, 4) * std::pow(tau, 3);
      REQUIRE_THAT(gap, WithinRel(model, 0.05));
    }
  }

  SECTION("deep in the small-tau regime the gap is within the quadratic bound") {
    for (double tau : {1e-6, 1e-7}) {
      const double gap = approx_rate(tau) - averaged_rate(tau);
      REQUIRE(gap <= gamma * gamma * tau / 4);
      REQUIRE(gap >= 0.0);
    }
  }
}
