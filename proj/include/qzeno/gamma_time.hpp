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

namespace qzeno {

// Gamma distribution of the random evolution time t' at laboratory time t:
// shape k = t/tau, scale tau, so mean = t and variance = tau*t.
struct GammaTimeDist {
  double t;
  double tau;

  GammaTimeDist(double t_, double tau_) : t(t_), tau(tau_) {
    if (t < 0.0) throw std::invalid_argument("GammaTimeDist: t must be >= 0");
    if (tau <= 0.0) throw std::invalid_argument("GammaTimeDist: tau must be > 0");
  }

  double shape() const { return t / tau; }
};

// Density evaluated in log space so that large shapes neither overflow the
// Gamma function nor underflow the power term.
inline double gamma_pdf(const GammaTimeDist& d, double t_prime) {
  if (t_prime <= 0.0) {
    throw std::invalid_argument("gamma_pdf: t_prime must be > 0");
  }
  if (d.t == 0.0) {
    throw std::invalid_argument(
        "gamma_pdf: t = 0 is a point mass at t_prime = 0, not a density");
  }
  const double k = d.shape();
  const double u = t_prime / d.tau;
  const double log_pdf =
      (k - 1.0) * std::log(u) - u - std::lgamma(k) - std::log(d.tau);
  return std::exp(log_pdf);
}

// Laplace transform of the density: E[e^{-lambda t'}] = (1 + lambda*tau)^{-t/tau},
// principal branch. This is the scalar version of the averaged evolution map.
inline Complex gamma_laplace(const GammaTimeDist& d, Complex lambda) {
  const Complex base = 1.0 + lambda * d.tau;
  if (base.real() <= 0.0) {
    throw std::domain_error("gamma_laplace: Re(1 + lambda*tau) must be > 0");
  }
  if (d.t == 0.0) return Complex(1.0, 0.0);
  return std::exp(-(d.t / d.tau) * std::log(base));
}

}  // namespace qzeno
