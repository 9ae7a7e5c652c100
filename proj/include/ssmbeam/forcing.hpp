#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ssmbeam/model.hpp"

namespace ssmbeam {

/// h(x, t) = cos(omega t) * sum_n modal_amplitudes[n] sin(n x).
struct ForcingProfile {
  std::map<int, double> modal_amplitudes{{1, 1.0}};
  double omega = 1.0;

  static ForcingProfile single_mode(double omega, int mode = 1, double amplitude = 1.0);
  double amplitude(int mode) const;
  void validate() const;
};

/// Sine-mode / temporal-harmonic coefficients hhat_{n,m} of a forcing
/// sum_{n,m} hhat_{n,m} e^{i m omega t} sin(n x).
using HarmonicTable = std::map<std::pair<int, int>, cplx>;

HarmonicTable forcing_harmonics(const ForcingProfile& forcing);

/// Time-periodic response w(x, t) = sum_{n,m} what_{n,m} e^{i m omega t} sin(n x).
struct PeriodicOrbit {
  HarmonicTable coefficients;
  double omega = 1.0;

  double period() const;
  cplx displacement(int mode, double t) const;
  cplx velocity(int mode, double t) const;
  /// Real displacement and velocity sine coefficients on modes 1..n_modes.
  std::pair<std::vector<double>, std::vector<double>> state_at(double t, int n_modes) const;
  /// Largest imaginary part of the reconstructed signal over the given times.
  double max_imaginary_residue(std::span<const double> times, int n_modes) const;
};

/// what_{n,m} = eps hhat_{n,m} / (i m omega (delta + beta n^2) + alpha n^4 + gamma
///              - m^2 omega^2 (mu n^2 + 1)). Throws ResonanceError when a
/// denominator falls below `tol` relative to alpha n^4 + gamma.
PeriodicOrbit linear_periodic_response(const BeamParameters& p, const HarmonicTable& h_hat,
                                       double omega, double eps, double tol = 1e-12);
PeriodicOrbit linear_periodic_response(const BeamParameters& p, const ForcingProfile& forcing,
                                       double eps, double tol = 1e-12);

}  // namespace ssmbeam
