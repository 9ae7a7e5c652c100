#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ssmbeam/forcing.hpp"
#include "ssmbeam/ssm_unforced.hpp"

namespace ssmbeam {

/// zdot = lambda1 z + R0 z^2 conj(z) + eps R1_0(theta), theta = omega t.
struct ForcedReducedModel {
  ReducedModel base;
  /// Eigen-coordinate weight of the forcing on mode 1: w_1 h_1 / (conj(lambda1) - lambda1).
  cplx forcing_coeff;
  double epsilon = 0.0;
  double omega = 1.0;

  /// forcing_coeff * cos(theta) * (-1, 1); the components multiply the two
  /// tangent directions K_(1,0) and K_(0,1).
  EigenCoords R1_0(double theta) const;
  double period() const;
};

/// (sine mode, theta harmonic) -> eigen coordinates.
using HarmonicCoefficients = std::map<std::pair<int, int>, EigenCoords>;

/// First-order-in-eps correction K^1_n(theta) = sum_j K^1_{n,j} e^{i j theta}.
struct FirstOrderTable {
  std::map<IndexPair, HarmonicCoefficients> entries;

  EigenCoords coefficient(IndexPair index, int mode, int harmonic) const;
  /// K^1 at a fixed theta collapsed into an ordinary coefficient table.
  CoefficientTable at_theta(double theta, const std::map<int, cplx>& lambdas,
                            MassScaling scaling) const;
};

struct ForcedSsm {
  CoefficientTable base_table;
  FirstOrderTable first_order;
  ForcedReducedModel model;
};

/// Solves the order-eps conjugacy by harmonic balance. Forcing must act on
/// sine mode 1 only. Throws ResonanceError when a denominator
/// lambda_n - (a lambda1 + b conj(lambda1)) - i j omega is below tolerance.
ForcedSsm first_order_coefficients(const BeamParameters& p, const ForcingProfile& forcing,
                                   const UnforcedSsm& unforced, double denominator_tol = 1e-8);

cplx forced_reduced_vector_field(const ForcedReducedModel& model, cplx z, double theta);

struct PolarRates {
  double r_dot = 0.0;
  double phi_dot = 0.0;
};

/// Polar form of the forced reduced field. Throws ValidationError for
/// r < 1e-6; use the Cartesian field there.
PolarRates forced_polar_rates(const ForcedReducedModel& model, double r, double phi,
                              double theta);

struct StroboscopicOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
};

/// Flow of the forced reduced ODE over one forcing period starting at phase theta0.
cplx stroboscopic_map(const ForcedReducedModel& model, cplx z0, double theta0,
                      const StroboscopicOptions& options = {});

/// z0, P(z0), ..., P^count(z0).
std::vector<cplx> stroboscopic_samples(const ForcedReducedModel& model, cplx z0, double theta0,
                                       int count, const StroboscopicOptions& options = {});

struct StroboscopicFixedPoint {
  cplx z;
  int iterations = 0;
  double last_step = 0.0;
};

/// Damped Newton with a finite-difference Jacobian (step 1e-7) from z = 0,
/// stopping once |dz| < 1e-12.
StroboscopicFixedPoint stroboscopic_fixed_point(const ForcedReducedModel& model, double theta0,
                                                int max_iterations = 50,
                                                const StroboscopicOptions& options = {});

/// ||Res(eps) - Res(0)|| where Res = A K + G(K) + eps h - DK R - omega d_theta K
/// with K = K^0 + eps K^1 and R = R^0 + eps R^1, on the first n_modes sine
/// modes (modal Euclidean norm, extended precision).
double epsilon_residual(const BeamParameters& p, const ForcedSsm& ssm, cplx z, double theta,
                        double epsilon, int n_modes);

}  // namespace ssmbeam
