#pragma once

#include <compare>
#include <map>
#include <span>
#include <vector>

#include "ssmbeam/model.hpp"

namespace ssmbeam {

/// Powers (n1, n2) of z and conj(z) in the parametrization K(z, zbar).
struct IndexPair {
  int n1 = 0;
  int n2 = 0;
  int order() const { return n1 + n2; }
  auto operator<=>(const IndexPair&) const = default;
};

/// Sine mode -> coefficient in the eigenbasis of that mode.
using ModeCoefficients = std::map<int, EigenCoords>;

/// Taylor coefficients of the two-dimensional slow manifold, stored in the
/// eigenbasis of the linear operator, up to |n| = 3.
struct CoefficientTable {
  std::map<IndexPair, ModeCoefficients> entries;
  /// lambda_n^+ for every sine mode referenced by `entries`.
  std::map<int, cplx> lambdas;
  MassScaling scaling = MassScaling::rayleigh;

  /// Coefficient of z^n1 zbar^n2 on `mode`; zero when not stored.
  EigenCoords coefficient(IndexPair index, int mode) const;
  int max_mode() const;
};

/// Reduced dynamics zdot = lambda1 z + R0 z^2 conj(z) on the slow manifold.
struct ReducedModel {
  cplx lambda1;
  cplx R0;

  double A_real() const { return lambda1.real(); }
  double B_imag() const { return lambda1.imag(); }
  /// Instantaneous frequency B + Im(R0) r^2.
  double omega_inst(double r) const { return B_imag() + R0.imag() * r * r; }
};

struct SsmBuildOptions {
  MassScaling scaling = MassScaling::rayleigh;
  /// Denominators below denominator_tol * |lambda_1| abort the build.
  double denominator_tol = 1e-8;
};

struct UnforcedSsm {
  CoefficientTable table;
  ReducedModel model;
};

/// Third-order slow manifold of the cubic beam f(u) = -kappa u^3 with the
/// normal-form coefficient R0 chosen so the z^2 zbar coefficient on the slow
/// direction vanishes. Throws ValidationError when the parameter
/// inequalities fail and ResonanceError for a vanishing denominator.
UnforcedSsm build_ssm(const BeamParameters& p, const SsmBuildOptions& options = {});

/// K(z) mapped to modal coordinates: element k holds the sine coefficients of
/// (u, u_t) on mode k + 1. `n_modes` = 0 means up to the table's largest mode.
std::vector<ModalPair> evaluate_parametrization(const CoefficientTable& table, cplx z,
                                                int n_modes = 0);

/// Value and first derivatives of K in eigen coordinates, per sine mode.
struct ParametrizationJet {
  std::vector<EigenCoords> value;
  std::vector<EigenCoords> d_z;
  std::vector<EigenCoords> d_zbar;
};
ParametrizationJet parametrization_jet(const CoefficientTable& table, cplx z, int n_modes);

/// Norm of A K + G(K) - DK R evaluated in the first `n_modes` sine modes
/// (modal Euclidean norm). Computed in extended precision.
double invariance_residual(const BeamParameters& p, const CoefficientTable& table,
                           const ReducedModel& model, cplx z, int n_modes);

cplx reduced_vector_field(const ReducedModel& model, cplx z);

struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;
};

/// Exact flow of the polar reduced system rdot = A r, thetadot = Omega(r).
PolarPoint reduced_flow_closed_form(const ReducedModel& model, double r0, double theta0,
                                    double t);

/// Norm used in the nominal amplitude: the full (u, u_t) state or the
/// displacement alone.
enum class AmpNorm { state, displacement };
std::string to_string(AmpNorm norm);
AmpNorm parse_amp_norm(const std::string& text);

struct BackbonePoint {
  double r = 0.0;
  double omega_inst = 0.0;
  double amplitude = 0.0;
};

/// RMS over theta of |V K(r e^{i theta})| by the trapezoid rule.
double nominal_amplitude(const CoefficientTable& table, double r, AmpNorm norm,
                         int theta_samples = 256);

std::vector<BackbonePoint> backbone(const ReducedModel& model, const CoefficientTable& table,
                                    std::span<const double> r_grid,
                                    AmpNorm norm = AmpNorm::state, int theta_samples = 256);

/// Leading cubic term of G(K(z)) in the eigenbasis (sine modes 1 and 3).
ModeCoefficients cubic_eigenbasis_projection(const BeamParameters& p, cplx z,
                                             MassScaling scaling = MassScaling::rayleigh);

}  // namespace ssmbeam
