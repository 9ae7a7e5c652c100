#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "ssmbeam/forcing.hpp"
#include "ssmbeam/model.hpp"

namespace ssmbeam {

/// int_0^pi sin^2(n x) dx; the one normalization constant linking sine
/// coefficients to integrals over the beam.
inline constexpr double kSineNormSquared = 1.5707963267948966;

enum class Integrator { rk4, adaptive };
std::string to_string(Integrator integrator);
Integrator parse_integrator(const std::string& text);

struct GalerkinConfig {
  int n_modes = 16;
  double dt = 1e-3;
  Integrator integrator = Integrator::rk4;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;

  void validate() const;
};

/// u = sum a_n sin(n x), u_t = sum b_n sin(n x), n = 1..N.
struct GalerkinState {
  std::vector<double> a;
  std::vector<double> b;
  double t = 0.0;

  static GalerkinState zero(int n_modes, double t = 0.0);
  int n_modes() const { return static_cast<int>(a.size()); }
  double norm() const;
};

/// Foundation force f(u) = sum_p coefficients[p] u^p, p >= 2.
struct PolynomialForce {
  std::map<int, double> coefficients;

  static PolynomialForce cubic(double kappa);
  void validate() const;
};

/// Sine coefficients of -kappa (sum a_n sin n x)^3 on modes 1..N.
std::vector<double> cubic_projection(std::span<const double> a, double kappa);
/// Sine coefficients of f(u) on modes 1..N, by exact trigonometric folding.
std::vector<double> force_projection(std::span<const double> a, const PolynomialForce& force);

/// Right-hand side of the N-mode Galerkin system; the returned state holds
/// (adot, bdot) and the input time.
GalerkinState rhs(const BeamParameters& p, const ForcingProfile& forcing,
                  const GalerkinState& state);
GalerkinState rhs(const BeamParameters& p, const ForcingProfile& forcing,
                  const PolynomialForce& force, const GalerkinState& state);

using Trajectory = std::vector<GalerkinState>;

/// Integrates from state0.t to each of `sample_times` (increasing, >= state0.t)
/// and returns the states there. Throws NumericalError on blow-up.
Trajectory integrate(const BeamParameters& p, const ForcingProfile& forcing,
                     const GalerkinConfig& config, const GalerkinState& state0,
                     std::span<const double> sample_times);
Trajectory integrate(const BeamParameters& p, const ForcingProfile& forcing,
                     const PolynomialForce& force, const GalerkinConfig& config,
                     const GalerkinState& state0, std::span<const double> sample_times);
/// Samples every `sample_dt` from state0.t to t_final (inclusive of both ends).
Trajectory integrate(const BeamParameters& p, const ForcingProfile& forcing,
                     const GalerkinConfig& config, const GalerkinState& state0,
                     double t_final, double sample_dt);

/// Closed-form linear semiflow exp(tA) applied mode by mode.
GalerkinState linear_flow_exact(const BeamParameters& p, const GalerkinState& state0, double t);

struct EnergyReport {
  double total = 0.0;
  double kinetic = 0.0;
  double bending = 0.0;
  double foundation = 0.0;
  double rotary = 0.0;
  double potential_f = 0.0;  // -int F(u) dx; kappa/4 int u^4 for the cubic foundation
};

EnergyReport energy(const BeamParameters& p, const GalerkinState& state);
EnergyReport energy(const BeamParameters& p, const PolynomialForce& force,
                    const GalerkinState& state);

/// Squared norm in H = H^1_0 x L^2 with the (alpha, gamma, mu) inner product.
double energy_space_norm_squared(const BeamParameters& p, const GalerkinState& state);

/// Time-2 pi/omega map starting at phase theta0 (t0 = theta0 / omega).
GalerkinState poincare_map(const BeamParameters& p, const ForcingProfile& forcing,
                           const GalerkinConfig& config, const GalerkinState& state,
                           double theta0);

struct PoincareOptions {
  double tol = 1e-10;
  int max_iterations = 25;
  double fd_step = 1e-7;
};

struct PoincareResult {
  GalerkinState state;
  int iterations = 0;
  double residual = 0.0;
};

/// Newton on P(U) - U = 0 seeded at the linear periodic response.
PoincareResult poincare_fixed_point(const BeamParameters& p, const ForcingProfile& forcing,
                                    const GalerkinConfig& config, double theta0,
                                    const PoincareOptions& options = {});

}  // namespace ssmbeam
