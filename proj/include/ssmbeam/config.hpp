#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ssmbeam/forced_ssm.hpp"
#include "ssmbeam/galerkin.hpp"
#include "ssmbeam/model.hpp"
#include "ssmbeam/ssm_unforced.hpp"

namespace ssmbeam {

/// Everything a subcommand may read. Unset keys keep these defaults.
struct RunConfig {
  BeamParameters params;
  ForcingProfile forcing;
  GalerkinConfig galerkin;
  std::string output_dir = ".";

  // spectrum / check
  int n_max = 50;
  int n_slow = 1;
  int m_max = 50;
  double resonance_tol = 1e-9;

  // ssm / backbone
  MassScaling mass_scaling = MassScaling::rayleigh;
  AmpNorm amp_norm = AmpNorm::state;
  int theta_samples = 256;
  std::vector<double> r_grid{0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  std::vector<double> kappa_list;
  std::vector<std::string> kappa_labels;

  // time integration
  double t_final = 20.0;
  double sample_dt = 0.01;
  std::optional<std::complex<double>> initial_z;
  std::vector<double> initial_a;
  std::vector<double> initial_b;

  // validate
  double fit_begin = 0.0;
  double fit_end = 20.0;
  double r_low = 0.01;
  double r_high = 0.05;
  double rate_tol = 0.02;

  // poincare / forced
  double theta0 = 0.0;
  double newton_tol = 1e-10;
  int max_iterations = 25;
  int strobe_count = 50;
};

/// Parses `key = value` lines; `#` starts a comment. Errors carry the line
/// number and are thrown as ValidationError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace ssmbeam
