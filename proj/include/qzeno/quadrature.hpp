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
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qzeno/algebra.hpp"
#include "qzeno/gamma_time.hpp"
#include "qzeno/generator.hpp"
#include "qzeno/matrix_functions.hpp"

namespace qzeno {

struct QuadratureConfig {
  enum class Scheme { GaussLaguerre, AdaptiveSubdivision };

  Scheme scheme = Scheme::GaussLaguerre;
  int nodes = 64;
  double abs_tol = 1e-10;

  void validate() const {
    if (nodes < 16) throw std::invalid_argument("QuadratureConfig: nodes must be >= 16");
    if (abs_tol <= 0.0) throw std::invalid_argument("QuadratureConfig: abs_tol must be > 0");
  }
};

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Golub-Welsch rule for the normalized weight u^{k-1} e^{-u} / Gamma(k) on
// (0, inf). Normalizing the weights to sum to 1 keeps the rule finite for
// shapes where Gamma(k) itself would overflow.
inline QuadratureRule gauss_gamma_rule(double k, int n) {
  if (k <= 0.0) throw std::invalid_argument("gauss_gamma_rule: shape must be > 0");
  if (n < 1) throw std::invalid_argument("gauss_gamma_rule: need at least one node");
  const double alpha = k - 1.0;
  Eigen::VectorXd diag(n), sub(n - 1);
  for (int j = 0; j < n; ++j) diag(j) = 2.0 * j + alpha + 1.0;
  for (int j = 1; j < n; ++j) sub(j - 1) = std::sqrt(j * (j + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_gamma_rule: tridiagonal eigensolve failed");
  }
  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double first = solver.eigenvectors()(0, i);
    rule.weights(i) = first * first;
  }
  return rule;
}

namespace detail {

// Applies e^{B u} to a fixed vector, factoring B once. Falls back to the
// squaring-based exponential when the eigenbasis is ill-conditioned.
class ExpApplier {
 public:
  explicit ExpApplier(const Matrix4c& b) : b_(b) {
    const Eigensystem es = eigensystem(b);
    spectral_ = es.condition <= kEigenvectorConditionLimit;
    if (spectral_) {
      values_ = es.values;
      vectors_ = es.vectors;
      inverse_ = es.vectors.colPivHouseholderQr().solve(Matrix4c::Identity());
    }
  }

  Vector4c apply(double u, const Vector4c& y0) const {
    if (!spectral_) return mat_exp(u * b_) * y0;
    Vector4c c = inverse_ * y0;
    for (int i = 0; i < 4; ++i) c(i) *= std::exp(values_(i) * u);
    return vectors_ * c;
  }

 private:
  Matrix4c b_;
  bool spectral_ = false;
  Vector4c values_;
  Matrix4c vectors_;
  Matrix4c inverse_;
};

inline Vector4c pairwise_sum(const std::vector<Vector4c>& terms, std::size_t lo,
                             std::size_t hi) {
  if (hi - lo == 1) return terms[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

inline Vector4c pairwise_sum(const std::vector<Vector4c>& terms) {
  if (terms.empty()) return Vector4c::Zero();
  return pairwise_sum(terms, 0, terms.size());
}

inline Vector4c gauss_estimate(const ExpApplier& prop, const Vector4c& y0,
                               double k, int n) {
  const QuadratureRule rule = gauss_gamma_rule(k, n);
  std::vector<Vector4c> terms(n);
  for (int i = 0; i < n; ++i) {
    terms[static_cast<std::size_t>(i)] = rule.weights(i) * prop.apply(rule.nodes(i), y0);
  }
  return pairwise_sum(terms);
}

// 15-point Gauss-Kronrod pair (QUADPACK abscissae); the error estimate is the
// deviation from the embedded 7-point Gauss value.
inline const double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline const double kGk15Kronrod[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline const double kGk15Gauss[4] = {0.129484966168870, 0.279705391489277,
                                     0.381830050505119, 0.417959183673469};

template <typename F>
std::pair<Vector4c, double> gk15_panel(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Vector4c fc = f(center);
  Vector4c kronrod = kGk15Kronrod[7] * fc;
  Vector4c gauss = kGk15Gauss[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kGk15Nodes[j];
    const Vector4c pair_sum = f(center - dx) + f(center + dx);
    kronrod += kGk15Kronrod[j] * pair_sum;
    if (j % 2 == 1) gauss += kGk15Gauss[j / 2] * pair_sum;
  }
  const double err = (kronrod - gauss).cwiseAbs().maxCoeff() * std::abs(half);
  return {kronrod * half, err};
}

struct AdaptiveBudget {
  int panels_left = 4096;
};

template <typename F>
double adaptive_gk15(const F& f, double a, double b, double tol, double span,
                     int depth, std::vector<Vector4c>& panels,
                     AdaptiveBudget& budget) {
  if (--budget.panels_left < 0) {
    throw std::runtime_error(
        "averaged_state_quadrature: node budget exhausted before convergence");
  }
  const auto [value, err] = gk15_panel(f, a, b);
  if (err <= tol * (b - a) / span || depth >= 50) {
    panels.push_back(value);
    return err;
  }
  const double mid = 0.5 * (a + b);
  return adaptive_gk15(f, a, mid, tol, span, depth + 1, panels, budget) +
         adaptive_gk15(f, mid, b, tol, span, depth + 1, panels, budget);
}

// Adaptive evaluation of E[f(u)] against the normalized Gamma weight.
// The head (0,1] is integrated in the variable v = u^k, which absorbs the
// u^{k-1} singularity exactly; the tail [1, U] is integrated directly with
// the density evaluated in log space.
inline std::pair<Vector4c, double> adaptive_estimate(const ExpApplier& prop,
                                                     const Vector4c& y0,
                                                     double k, double tol) {
  const double log_gamma_k = std::lgamma(k);
  std::vector<Vector4c> panels;
  AdaptiveBudget budget;

  const auto head = [&](double v) -> Vector4c {
    const double u = v > 0.0 ? std::pow(v, 1.0 / k) : 0.0;
    const double scale = std::exp(-u - log_gamma_k - std::log(k));
    return scale * prop.apply(u, y0);
  };
  double err = adaptive_gk15(head, 0.0, 1.0, 0.5 * tol, 1.0, 0, panels, budget);

  const double upper = std::max(2.0, k + 40.0 * std::sqrt(k) + 60.0);
  const auto tail = [&](double u) -> Vector4c {
    const double scale = std::exp((k - 1.0) * std::log(u) - u - log_gamma_k);
    return scale * prop.apply(u, y0);
  };
  err += adaptive_gk15(tail, 1.0, upper, 0.5 * tol, upper - 1.0, 0, panels, budget);

  return {pairwise_sum(panels), err};
}

}  // namespace detail

// Averaged evolution by direct discretization of the time integral: the state
// e^{G t'} y0 weighted by the Gamma density of t', in the scaled variable
// u = t'/tau. Gauss-Laguerre is tried first with a node-doubling error
// estimate; the adaptive route takes over when that estimate misses abs_tol.
inline Vector4c averaged_vec_quadrature(const Matrix4c& generator,
                                        const Vector4c& y0, double t, double tau,
                                        const QuadratureConfig& config = {}) {
  config.validate();
  if (t <= 0.0) throw std::invalid_argument("averaged_vec_quadrature: t must be > 0");
  if (tau <= 0.0) throw std::invalid_argument("averaged_vec_quadrature: tau must be > 0");

  const double k = t / tau;
  const detail::ExpApplier prop(tau * generator);

  if (config.scheme == QuadratureConfig::Scheme::GaussLaguerre) {
    const Vector4c coarse = detail::gauss_estimate(prop, y0, k, config.nodes);
    const Vector4c fine = detail::gauss_estimate(prop, y0, k, 2 * config.nodes);
    if ((fine - coarse).cwiseAbs().maxCoeff() <= config.abs_tol) return fine;
  }

  const auto [value, err] = detail::adaptive_estimate(prop, y0, k, config.abs_tol);
  if (err > config.abs_tol) {
    throw std::runtime_error(
        "averaged_state_quadrature: estimated error exceeds abs_tol");
  }
  return value;
}

inline DensityMatrix averaged_state_quadrature(const Generator& g,
                                               const DensityMatrix& rho0,
                                               const GammaTimeDist& d,
                                               const QuadratureConfig& config = {}) {
  if (d.t <= 0.0) {
    throw std::invalid_argument("averaged_state_quadrature: requires t > 0");
  }
  const Vector4c averaged =
      averaged_vec_quadrature(g.matrix, vec(rho0.matrix()), d.t, d.tau, config);
  return DensityMatrix(unvec(averaged));
}

}  // namespace qzeno
