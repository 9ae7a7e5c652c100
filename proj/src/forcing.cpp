#include "ssmbeam/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ssmbeam/errors.hpp"

namespace ssmbeam {

ForcingProfile ForcingProfile::single_mode(double omega, int mode, double amplitude) {
  ForcingProfile f;
  f.modal_amplitudes = {{mode, amplitude}};
  f.omega = omega;
  return f;
}

double ForcingProfile::amplitude(int mode) const {
  const auto it = modal_amplitudes.find(mode);
  return it == modal_amplitudes.end() ? 0.0 : it->second;
}

void ForcingProfile::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw ValidationError("forcing frequency must be positive and finite");
  }
  for (const auto& [mode, amp] : modal_amplitudes) {
    if (mode < 1) throw ValidationError("forcing mode index must be >= 1");
    if (!std::isfinite(amp)) throw ValidationError("forcing amplitudes must be finite");
  }
}

HarmonicTable forcing_harmonics(const ForcingProfile& forcing) {
  HarmonicTable h;
  for (const auto& [mode, amp] : forcing.modal_amplitudes) {
    if (amp == 0.0) continue;
    h[{mode, 1}] = cplx{0.5 * amp, 0.0};
    h[{mode, -1}] = cplx{0.5 * amp, 0.0};
  }
  return h;
}

double PeriodicOrbit::period() const { return 2.0 * std::numbers::pi / omega; }

cplx PeriodicOrbit::displacement(int mode, double t) const {
  cplx acc{0.0, 0.0};
  for (const auto& [key, w] : coefficients) {
    if (key.first != mode) continue;
    acc += w * std::exp(cplx{0.0, key.second * omega * t});
  }
  return acc;
}

cplx PeriodicOrbit::velocity(int mode, double t) const {
  cplx acc{0.0, 0.0};
  for (const auto& [key, w] : coefficients) {
    if (key.first != mode) continue;
    const cplx iw{0.0, key.second * omega};
    acc += iw * w * std::exp(iw * t);
  }
  return acc;
}

std::pair<std::vector<double>, std::vector<double>> PeriodicOrbit::state_at(double t,
                                                                           int n_modes) const {
  std::vector<double> a(n_modes, 0.0);
  std::vector<double> b(n_modes, 0.0);
  for (int n = 1; n <= n_modes; ++n) {
    a[n - 1] = displacement(n, t).real();
    b[n - 1] = velocity(n, t).real();
  }
  return {a, b};
}

double PeriodicOrbit::max_imaginary_residue(std::span<const double> times, int n_modes) const {
  double worst = 0.0;
  for (double t : times) {
    for (int n = 1; n <= n_modes; ++n) {
      worst = std::max(worst, std::abs(displacement(n, t).imag()));
      worst = std::max(worst, std::abs(velocity(n, t).imag()));
    }
  }
  return worst;
}

PeriodicOrbit linear_periodic_response(const BeamParameters& p, const HarmonicTable& h_hat,
                                       double omega, double eps, double tol) {
  PeriodicOrbit orbit;
  orbit.omega = omega;
  for (const auto& [key, h] : h_hat) {
    const auto [n, m] = key;
    const double n2 = static_cast<double>(n) * n;
    const double mt = m * omega;
    const double stiffness = p.alpha * n2 * n2 + p.gamma;
    const cplx denom{stiffness - mt * mt * (p.mu * n2 + 1.0), mt * (p.delta + p.beta * n2)};
    if (std::abs(denom) <= tol * std::max(1.0, stiffness)) {
      throw ResonanceError("linear resonance at (n,m) = (" + std::to_string(n) + "," +
                           std::to_string(m) + ")");
    }
    orbit.coefficients[key] = eps * h / denom;
  }
  return orbit;
}

PeriodicOrbit linear_periodic_response(const BeamParameters& p, const ForcingProfile& forcing,
                                       double eps, double tol) {
  forcing.validate();
  return linear_periodic_response(p, forcing_harmonics(forcing), forcing.omega, eps, tol);
}

}  // namespace ssmbeam
