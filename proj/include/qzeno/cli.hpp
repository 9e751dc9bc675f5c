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

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qzeno/algebra.hpp"
#include "qzeno/approx.hpp"
#include "qzeno/averaged.hpp"
#include "qzeno/format.hpp"
#include "qzeno/gamma_time.hpp"
#include "qzeno/generator.hpp"
#include "qzeno/quadrature.hpp"

namespace qzeno {

// Exit codes: 0 success, 1 usage error, 2 numeric contract breach.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;

inline StateSpec parse_state_spec(const std::string& text) {
  if (text == "excited") return StateSpec::excited();
  if (text == "ground") return StateSpec::ground();
  if (text == "mixed") return StateSpec::mixed();
  if (text.rfind("bloch:", 0) == 0) {
    double x = 0.0, y = 0.0, z = 0.0;
    char comma1 = 0, comma2 = 0;
    std::istringstream stream(text.substr(6));
    stream >> x >> comma1 >> y >> comma2 >> z;
    if (!stream || comma1 != ',' || comma2 != ',' || stream.rdbuf()->in_avail() != 0) {
      throw std::invalid_argument("initial state: expected bloch:x,y,z");
    }
    if (x * x + y * y + z * z > 1.0 + 1e-12) {
      throw std::invalid_argument("initial state: Bloch vector outside the unit ball");
    }
    return StateSpec::bloch(x, y, z);
  }
  throw std::invalid_argument(
      "initial state: expected excited, ground, mixed, or bloch:x,y,z");
}

namespace cli_detail {

struct CommonOptions {
  double omega = 0.0;
  double gamma = 1.0;
  double kappa = 0.0;
  std::vector<double> taus{0.0, 0.5, 5.0, 50.0};
  double t_max = 10.0;
  int steps = 500;
  std::string initial = "excited";
  std::string method = "closed";
  std::string out_path;
};

struct PdfOptions {
  std::vector<double> ratios{0.1, 1.0, 5.0};
  double tau = 1.0;
  double u_max = 12.0;
  int steps = 600;
  std::string out_path;
};

inline int write_output(const std::string& payload, const std::string& path,
                        std::ostream& out, std::ostream& err) {
  if (path.empty()) {
    out << payload;
    return kExitOk;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    err << "error: cannot open output file '" << path << "'\n";
    return kExitUsage;
  }
  file << payload;
  return kExitOk;
}

inline double inversion_matrixfn(const Generator& g, const DensityMatrix& rho0,
                                 double tau, double t) {
  if (tau == 0.0) return propagate_exact(g, rho0, t).bloch().z;
  return averaged_state_matrixfn(build_v_map(g, tau, t), rho0).bloch().z;
}

inline double inversion_quadrature(const Generator& g, const DensityMatrix& rho0,
                                   double tau, double t) {
  if (t == 0.0) return rho0.bloch().z;
  if (tau == 0.0) return propagate_exact(g, rho0, t).bloch().z;
  return averaged_state_quadrature(g, rho0, GammaTimeDist(t, tau)).bloch().z;
}

inline int cmd_pdf(const PdfOptions& opt, std::ostream& out, std::ostream& err) {
  std::string csv = "t_prime_over_tau";
  for (const double ratio : opt.ratios) csv += ",pdf_ratio_" + format_number(ratio);
  csv += '\n';

  const double du = opt.u_max / opt.steps;
  for (int j = 1; j <= opt.steps; ++j) {
    const double u = j * du;
    csv += format_number(u);
    for (const double ratio : opt.ratios) {
      const GammaTimeDist dist(ratio * opt.tau, opt.tau);
      csv += ',' + format_number(gamma_pdf(dist, u * opt.tau));
    }
    csv += '\n';
  }
  return write_output(csv, opt.out_path, out, err);
}

inline int cmd_decay(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  const DensityMatrix rho0 = state_from_spec(parse_state_spec(opt.initial));
  const double s0 = rho0.bloch().z;

  std::string csv = "gamma_t";
  for (const double tau : opt.taus) {
    csv += ",sigma_z_gtau_" + format_number(opt.gamma * tau);
  }
  csv += '\n';

  const TimeGrid grid(opt.t_max, opt.steps);
  for (int i = 0; i < opt.steps; ++i) {
    const double t = grid.time(i);
    csv += format_number(opt.gamma * t);
    for (const double tau : opt.taus) {
      const double closed = averaged_inversion_closed(s0, opt.gamma, tau, t);
      double value = closed;
      if (opt.method != "closed") {
        const Generator g =
            build_generator({opt.omega, opt.gamma, opt.kappa, tau});
        value = opt.method == "matrixfn"
                    ? inversion_matrixfn(g, rho0, tau, t)
                    : inversion_quadrature(g, rho0, tau, t);
        if (std::abs(value - closed) > 1e-6) {
          err << "decay: method '" << opt.method
              << "' disagrees with the closed form\n"
              << "  tau=" << format_number(tau) << " t=" << format_number(t)
              << "\n  closed=" << format_number(closed) << "\n  " << opt.method
              << "=" << format_number(value)
              << "\n  |diff|=" << format_number(std::abs(value - closed)) << '\n';
          return kExitNumeric;
        }
      }
      csv += ',' + format_number(value);
    }
    csv += '\n';
  }
  return write_output(csv, opt.out_path, out, err);
}

inline int cmd_compare(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  const DensityMatrix rho0 = state_from_spec(parse_state_spec(opt.initial));
  const double s0 = rho0.bloch().z;
  const TimeGrid grid(opt.t_max, opt.steps);
  constexpr double kRouteTol = 1e-8;

  std::string csv =
      "gamma_tau,gamma_t,s_closed,s_matrixfn,s_quadrature,s_ode_log,s_ode_approx\n";
  std::string summary;
  bool breach = false;

  for (const double tau : opt.taus) {
    const Generator g = build_generator({opt.omega, opt.gamma, opt.kappa, tau});
    const Matrix4c log_gen =
        tau > 0.0 ? Matrix4c(-mat_log_principal(
                                 Matrix4c(Matrix4c::Identity() - tau * g.matrix)) /
                             tau)
                  : g.matrix;
    const Trajectory ode_log = integrate_linear_ode(log_gen, rho0, grid);
    const Trajectory ode_approx = integrate_linear_ode(
        build_approx_generator(opt.omega, opt.gamma, tau).matrix, rho0, grid);

    double max_mf_closed = 0.0;
    double max_quad_mf = 0.0;
    double max_ode_mf = 0.0;
    double approx_gap = 0.0;

    for (int i = 0; i < opt.steps; ++i) {
      const double t = grid.time(i);
      const double closed = averaged_inversion_closed(s0, opt.gamma, tau, t);

      DensityMatrix mf = tau == 0.0
                             ? propagate_exact(g, rho0, t)
                             : averaged_state_matrixfn(build_v_map(g, tau, t), rho0);
      DensityMatrix quad =
          (t == 0.0 || tau == 0.0)
              ? (t == 0.0 ? rho0 : propagate_exact(g, rho0, t))
              : averaged_state_quadrature(g, rho0, GammaTimeDist(t, tau));

      const Vector4c mf_vec = vec(mf.matrix());
      max_mf_closed = std::max(max_mf_closed, std::abs(mf.bloch().z - closed));
      max_quad_mf = std::max(
          max_quad_mf, (vec(quad.matrix()) - mf_vec).cwiseAbs().maxCoeff());
      max_ode_mf = std::max(max_ode_mf, (vec(ode_log.states[i].matrix()) - mf_vec)
                                            .cwiseAbs()
                                            .maxCoeff());
      approx_gap = std::max(approx_gap, (vec(ode_approx.states[i].matrix()) - mf_vec)
                                            .cwiseAbs()
                                            .maxCoeff());

      csv += format_number(opt.gamma * tau) + ',' + format_number(opt.gamma * t) +
             ',' + format_number(closed) + ',' + format_number(mf.bloch().z) + ',' +
             format_number(quad.bloch().z) + ',' +
             format_number(ode_log.bloch[i].z) + ',' +
             format_number(ode_approx.bloch[i].z) + '\n';
    }

    const bool tau_ok = max_mf_closed <= kRouteTol && max_quad_mf <= kRouteTol &&
                        max_ode_mf <= kRouteTol;
    breach = breach || !tau_ok;
    summary += "tau=" + format_number(tau) +
               ": |matrixfn-closed|=" + format_number(max_mf_closed) +
               " |quadrature-matrixfn|=" + format_number(max_quad_mf) +
               " |ode_log-matrixfn|=" + format_number(max_ode_mf) +
               " approx_gap=" + format_number(approx_gap) +
               (tau_ok ? "  [ok]\n" : "  [BREACH]\n");
  }

  summary += breach ? "compare: route disagreement beyond 1e-8\n"
                    : "compare: routes agree within 1e-8 (approximate route "
                      "reports its gap)\n";
  err << summary;
  const int write_status = write_output(csv, opt.out_path, out, err);
  if (write_status != kExitOk) return write_status;
  return breach ? kExitNumeric : kExitOk;
}

inline std::string spectrum_block(const std::string& label, const Matrix4c& m) {
  Eigen::ComplexEigenSolver<Matrix4c> solver(m);
  std::vector<Complex> values(4);
  for (int i = 0; i < 4; ++i) values[i] = solver.eigenvalues()(i);
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::string text = label + ":\n";
  for (const Complex& v : values) text += "  " + format_complex(v) + '\n';
  return text;
}

inline int cmd_spectrum(const CommonOptions& opt, std::ostream& out,
                        std::ostream& err) {
  const double tau = opt.taus.empty() ? 0.0 : opt.taus.front();
  const Generator g = build_generator({opt.omega, opt.gamma, opt.kappa, tau});

  std::string text = spectrum_block("eigenvalues of G", g.matrix);
  if (tau > 0.0) {
    const Matrix4c base = Matrix4c::Identity() - tau * g.matrix;
    text += spectrum_block("eigenvalues of I - tau*G", base);
    text += spectrum_block("eigenvalues of the log generator",
                           Matrix4c(-mat_log_principal(base) / tau));
  } else {
    text += "tau = 0: averaged map equals the bare semigroup exp(G t)\n";
  }
  text += "effective population decay rate: " +
          format_number(effective_decay_rate(opt.gamma, tau)) +
          " (bare gamma: " + format_number(opt.gamma) + ")\n";
  return write_output(text, opt.out_path, out, err);
}

}  // namespace cli_detail

// Entry point shared by the binary and the tests; returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Dissipative two-level atom with a Gamma-distributed random "
               "evolution time"};
  app.require_subcommand(1);

  cli_detail::PdfOptions pdf;
  cli_detail::CommonOptions decay, compare, spectrum;

  const auto state_validator = CLI::Validator(
      [](std::string& input) -> std::string {
        try {
          parse_state_spec(input);
        } catch (const std::exception& e) {
          return std::string(e.what());
        }
        return {};
      },
      "STATE");

  CLI::App* pdf_cmd = app.add_subcommand(
      "pdf",
      "Evolution-time density against u = t'/tau.\n"
      "CSV columns: t_prime_over_tau, then one pdf column per --ratio.");
  pdf_cmd->add_option("--ratio", pdf.ratios, "t/tau values, one column each")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pdf_cmd->add_option("--tau", pdf.tau, "fluctuation scale tau")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pdf_cmd->add_option("--tmax", pdf.u_max, "largest t'/tau on the grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pdf_cmd->add_option("--steps", pdf.steps, "grid points on (0, tmax]")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  pdf_cmd->add_option("--out", pdf.out_path, "output file (default: stdout)");

  const auto add_common = [&](CLI::App* cmd, cli_detail::CommonOptions& opt,
                              bool with_method, bool single_tau) {
    cmd->add_option("--omega", opt.omega, "level splitting omega")
        ->capture_default_str();
    cmd->add_option("--gamma", opt.gamma, "decay rate gamma")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--kappa", opt.kappa, "dephasing rate kappa")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--tau", opt.taus,
                    single_tau ? "fluctuation scale tau"
                               : "fluctuation scales (repeatable, one per column)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--tmax", opt.t_max, "largest time on the grid")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--steps", opt.steps, "grid points on [0, tmax]")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    cmd->add_option("--initial", opt.initial,
                    "initial state: excited | ground | mixed | bloch:x,y,z")
        ->check(state_validator)
        ->capture_default_str();
    if (with_method) {
      cmd->add_option("--method", opt.method, "compute route for the columns")
          ->check(CLI::IsMember({"closed", "matrixfn", "quadrature"}))
          ->capture_default_str();
    }
    cmd->add_option("--out", opt.out_path, "output file (default: stdout)");
  };

  CLI::App* decay_cmd = app.add_subcommand(
      "decay",
      "Averaged population inversion <sigma_z>(t), one column per tau.\n"
      "CSV columns: gamma_t, then sigma_z_gtau_<gamma*tau> per tau.");
  add_common(decay_cmd, decay, true, false);

  CLI::App* compare_cmd = app.add_subcommand(
      "compare",
      "Cross-checks all compute routes; summary goes to stderr.\n"
      "CSV columns: gamma_tau, gamma_t, s_closed, s_matrixfn, s_quadrature, "
      "s_ode_log, s_ode_approx.");
  add_common(compare_cmd, compare, false, false);

  CLI::App* spectrum_cmd = app.add_subcommand(
      "spectrum",
      "Eigenvalues of the generator, of I - tau*G, and of the log generator, "
      "plus the effective decay rate.");
  spectrum.taus = {1.0};
  add_common(spectrum_cmd, spectrum, false, true);

  try {
    // CLI11's vector overload consumes the arguments back to front.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (pdf_cmd->parsed()) return cli_detail::cmd_pdf(pdf, out, err);
    if (decay_cmd->parsed()) return cli_detail::cmd_decay(decay, out, err);
    if (compare_cmd->parsed()) return cli_detail::cmd_compare(compare, out, err);
    return cli_detail::cmd_spectrum(spectrum, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace qzeno
