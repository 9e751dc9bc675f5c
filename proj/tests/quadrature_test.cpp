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
#include <complex>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace qzeno;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("quadrature configuration is validated", "[quadrature]") {
  QuadratureConfig config;
  config.nodes = 8;
  REQUIRE_THROWS_WITH(config.validate(), ContainsSubstring("nodes"));
  config.nodes = 64;
  config.abs_tol = 0.0;
  REQUIRE_THROWS_WITH(config.validate(), ContainsSubstring("abs_tol"));
  config.abs_tol = 1e-10;
  REQUIRE_NOTHROW(config.validate());

  REQUIRE_THROWS_AS(gauss_gamma_rule(-1.0, 16), std::invalid_argument);
  REQUIRE_THROWS_AS(gauss_gamma_rule(1.0, 0), std::invalid_argument);
}

TEST_CASE("Gauss rule integrates the weight's moments exactly", "[quadrature]") {
  for (double k : {0.5, 1.0, 5.0, 50.0}) {
    const QuadratureRule rule = gauss_gamma_rule(k, 48);

    double mass = 0, m1 = 0, m2 = 0, m3 = 0;
    for (int i = 0; i < rule.nodes.size(); ++i) {
      REQUIRE(rule.nodes(i) > 0.0);
      if (i > 0) REQUIRE(rule.nodes(i) > rule.nodes(i - 1));
      const double u = rule.nodes(i);
      const double w = rule.weights(i);
      mass += w;
      m1 += w * u;
      m2 += w * u * u;
      m3 += w * u * u * u;
    }
    REQUIRE_THAT(mass, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(m1, WithinRel(k, 1e-12));
    REQUIRE_THAT(m2, WithinRel(k * (k + 1), 1e-12));
    REQUIRE_THAT(m3, WithinRel(k * (k + 1) * (k + 2), 1e-12));
  }
}

TEST_CASE("diagonal generators reduce to the scalar transform", "[quadrature]") {
  const double tau = 0.4;
  Matrix4c g = Matrix4c::Zero();
  const double rates[4] = {0.0, 0.5, 1.0 / tau, 6.0};
  for (int i = 0; i < 4; ++i) g(i, i) = Complex(-rates[i], 0);

  for (double k : {0.5, 1.0, 5.0}) {
    const double t = k * tau;
    const GammaTimeDist dist(t, tau);
    const Vector4c out =
        averaged_vec_quadrature(g, Vector4c::Ones(), t, tau);
    for (int i = 0; i < 4; ++i) {
      const Complex want = gamma_laplace(dist, Complex(rates[i], 0));
      REQUIRE(std::abs(out(i) - want) <= 1e-10);
    }
  }
}

TEST_CASE("quadrature agrees with the matrix-function route", "[quadrature]") {
  SystemParams params;
  params.omega = 0.7;
  params.gamma = 1;
  params.kappa = 0.1;
  params.tau = 0;
  const Generator g = build_generator(params);
  const DensityMatrix rho0 = state_from_spec(StateSpec::bloch(0.6, 0.2, 0.5));

  for (double gamma_tau : {0.5, 5.0, 50.0}) {
    const double tau = gamma_tau / params.gamma;
    const double t = 2.0;
    const AveragedEvolution ev = build_v_map(g, tau, t);
    const DensityMatrix via_matrixfn = averaged_state_matrixfn(ev, rho0);
    const DensityMatrix via_quadrature =
        averaged_state_quadrature(g, rho0, GammaTimeDist(t, tau));
    REQUIRE(test::max_abs_diff(via_quadrature.matrix(), via_matrixfn.matrix()) <=
            1e-8);
  }
}

TEST_CASE("adaptive fallback stays accurate at large tau", "[quadrature]") {
  // gamma*tau = 50 puts the shape near 0.04 where the fixed rule cannot
  // resolve the integrable singularity; the node-doubling check detects that
  // and the adaptive route must recover the closed-form inversion.
  SystemParams params;
  params.omega = 0;
  params.gamma = 1;
  params.kappa = 0;
  params.tau = 0;
  const Generator g = build_generator(params);
  const double tau = 50.0;
  const double t = 2.0;

  const DensityMatrix out = averaged_state_quadrature(
      g, state_from_spec(StateSpec::excited()), GammaTimeDist(t, tau));
  const double s = out.bloch().z;
  REQUIRE_THAT(s, WithinAbs(averaged_inversion_closed(1.0, 1.0, tau, t), 1e-9));
  REQUIRE_THAT(s, WithinAbs(0.7089414697, 1e-9));
}

TEST_CASE("quadrature preserves the trace", "[quadrature]") {
  SystemParams params;
  params.omega = 2;
  params.gamma = 1;
  params.kappa = 0.3;
  params.tau = 0;
  const Generator g = build_generator(params);
  const DensityMatrix rho0 = state_from_spec(StateSpec::bloch(0.3, 0.4, -0.2));

  for (double tau : {0.2, 5.0}) {
    for (double t : {0.5, 4.0}) {
      const DensityMatrix out =
          averaged_state_quadrature(g, rho0, GammaTimeDist(t, tau));
      REQUIRE(out.trace_defect() <= 1e-10);
      REQUIRE(out.hermiticity_defect() <= 1e-10);
    }
  }
}

TEST_CASE("quadrature results are deterministic", "[quadrature]") {
  SystemParams params;
  params.omega = 1.1;
  params.gamma = 1;
  params.kappa = 0;
  params.tau = 0;
  const Generator g = build_generator(params);
  const Vector4c y0 = vec(state_from_spec(StateSpec::bloch(0.5, 0.5, 0.1)).matrix());

  const Vector4c a = averaged_vec_quadrature(g.matrix, y0, 3.0, 50.0);
  const Vector4c b = averaged_vec_quadrature(g.matrix, y0, 3.0, 50.0);
  for (int i = 0; i < 4; ++i) {
    REQUIRE(a(i).real() == b(i).real());
    REQUIRE(a(i).imag() == b(i).imag());
  }
}

TEST_CASE("quadrature rejects bad inputs and reports non-convergence",
          "[quadrature]") {
  SystemParams params;
  params.gamma = 1;
  const Generator g = build_generator(params);
  const DensityMatrix rho0 = state_from_spec(StateSpec::excited());

  REQUIRE_THROWS_AS(
      averaged_vec_quadrature(g.matrix, vec(rho0.matrix()), -1.0, 1.0),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      averaged_vec_quadrature(g.matrix, vec(rho0.matrix()), 1.0, 0.0),
      std::invalid_argument);
  REQUIRE_THROWS_WITH(
      averaged_state_quadrature(g, rho0, GammaTimeDist(0.0, 1.0)),
      ContainsSubstring("t > 0"));

  QuadratureConfig unreachable;
  unreachable.abs_tol = 1e-30;
  REQUIRE_THROWS_WITH(
      averaged_state_quadrature(g, rho0, GammaTimeDist(2.0, 50.0), unreachable),
      ContainsSubstring("averaged_state_quadrature"));
}
