#pragma once

#include <vector>

#include "ssmbeam/galerkin.hpp"
#include "ssmbeam/ssm_unforced.hpp"

namespace ssmbeam {

struct ValidationOptions {
  double t_final = 20.0;
  double sample_dt = 0.01;
  /// Window for the least-squares fit of log|zhat(t)|.
  double fit_begin = 0.0;
  double fit_end = 20.0;
  /// Amplitude window for the phase-rate comparison.
  double r_low = 0.01;
  double r_high = 0.05;
};

struct ValidationSample {
  double t = 0.0;
  double manifold_distance = 0.0;   // min over z of |state - K(z)|, Gauss-Newton from zhat
  double projection_distance = 0.0; // |state - K(zhat)| with the linear zhat
  double z_abs = 0.0;
  double z_abs_predicted = 0.0;
  double phase_rate = 0.0;      // central difference of unwrapped arg(zhat); 0 at the ends
  double omega_predicted = 0.0; // Omega(|zhat|)
};

struct SsmValidationReport {
  std::vector<ValidationSample> samples;
  double decay_slope = 0.0;
  double decay_rate_expected = 0.0;
  double decay_slope_rel_error = 0.0;
  double max_phase_rel_error = 0.0;
  int phase_samples = 0;
  double max_radius_rel_error = 0.0;
  double max_manifold_distance = 0.0;
  double max_projection_distance = 0.0;
};

struct ManifoldProjection {
  cplx z;
  double distance = 0.0;
};

/// Closest point K(z) to a Galerkin state (modal Euclidean norm), refined by
/// Gauss-Newton from `z_start`.
ManifoldProjection project_onto_manifold(const CoefficientTable& table, const GalerkinState& state,
                                         cplx z_start, int iterations = 8);

/// Runs the Galerkin model from Re K(z0) and tracks the mode-1 eigen
/// coordinate zhat(t) (linear projection, accurate to O(|z|^2)).
SsmValidationReport validate_ssm(const BeamParameters& p, const CoefficientTable& table,
                                 const ReducedModel& model, const GalerkinConfig& config,
                                 cplx z0, const ValidationOptions& options = {});

}  // namespace ssmbeam
