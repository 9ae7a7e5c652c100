#include "ssmbeam/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "ssmbeam/errors.hpp"

namespace ssmbeam {

namespace {

// Residual state - K(z) and its derivatives in x = Re z, y = Im z, stacked as
// (a_1..a_N, b_1..b_N).
void residual_and_jacobian(const CoefficientTable& table, const GalerkinState& state, cplx z,
                           Eigen::VectorXd& res, Eigen::MatrixXd& jac) {
  const int n = state.n_modes();
  const ParametrizationJet jet = parametrization_jet(table, z, n);
  res.resize(2 * n);
  jac.resize(2 * n, 2);
  for (int k = 0; k < n; ++k) {
    const auto it = table.lambdas.find(k + 1);
    const cplx lam = it == table.lambdas.end() ? cplx{} : it->second;
    auto modal = [&](const EigenCoords& c) {
      return ModalPair{c.plus + c.minus, lam * c.plus + std::conj(lam) * c.minus};
    };
    const ModalPair v = modal(jet.value[k]);
    const ModalPair dx = modal({jet.d_z[k].plus + jet.d_zbar[k].plus,
                                jet.d_z[k].minus + jet.d_zbar[k].minus});
    const cplx i{0.0, 1.0};
    const ModalPair dy = modal({i * (jet.d_z[k].plus - jet.d_zbar[k].plus),
                                i * (jet.d_z[k].minus - jet.d_zbar[k].minus)});
    res[k] = state.a[k] - v.u.real();
    res[n + k] = state.b[k] - v.v.real();
    jac(k, 0) = dx.u.real();
    jac(k, 1) = dy.u.real();
    jac(n + k, 0) = dx.v.real();
    jac(n + k, 1) = dy.v.real();
  }
}

}  // namespace

ManifoldProjection project_onto_manifold(const CoefficientTable& table, const GalerkinState& state,
                                         cplx z_start, int iterations) {
  cplx z = z_start;
  Eigen::VectorXd res;
  Eigen::MatrixXd jac;
  for (int it = 0; it < iterations; ++it) {
    residual_and_jacobian(table, state, z, res, jac);
    const Eigen::Vector2d step = jac.colPivHouseholderQr().solve(res);
    z += cplx{step[0], step[1]};
    if (std::abs(cplx{step[0], step[1]}) <= 1e-15 * std::max(1e-300, std::abs(z))) break;
  }
  residual_and_jacobian(table, state, z, res, jac);
  return {z, res.norm()};
}

SsmValidationReport validate_ssm(const BeamParameters& p, const CoefficientTable& table,
                                 const ReducedModel& model, const GalerkinConfig& config,
                                 cplx z0, const ValidationOptions& options) {
  config.validate();
  if (!(options.sample_dt > 0.0) || !(options.t_final > options.sample_dt)) {
    throw ValidationError("validation needs sample_dt > 0 and t_final > sample_dt");
  }
  const int n = config.n_modes;
  const auto start = evaluate_parametrization(table, z0, n);
  GalerkinState s0 = GalerkinState::zero(n);
  for (int k = 0; k < n; ++k) {
    s0.a[k] = start[k].u.real();
    s0.b[k] = start[k].v.real();
  }
  BeamParameters unforced = p;
  unforced.epsilon = 0.0;
  const Trajectory traj =
      integrate(unforced, ForcingProfile{}, config, s0, options.t_final, options.sample_dt);

  SsmValidationReport report;
  report.decay_rate_expected = model.A_real();
  std::vector<double> phase;
  for (const GalerkinState& s : traj) {
    const cplx zhat = modal_to_eigen(p, 1, ModalPair{s.a[0], s.b[0]}).plus;
    const auto on_manifold = evaluate_parametrization(table, zhat, n);
    double dist = 0.0;
    for (int k = 0; k < n; ++k) {
      dist += std::norm(s.a[k] - on_manifold[k].u) + std::norm(s.b[k] - on_manifold[k].v);
    }
    ValidationSample v;
    v.t = s.t;
    v.projection_distance = std::sqrt(dist);
    v.manifold_distance = project_onto_manifold(table, s, zhat).distance;
    v.z_abs = std::abs(zhat);
    v.z_abs_predicted = std::exp(model.A_real() * s.t) * std::abs(z0);
    v.omega_predicted = model.omega_inst(v.z_abs);
    report.samples.push_back(v);
    const double arg = std::arg(zhat);
    if (phase.empty()) {
      phase.push_back(arg);
    } else {
      double step = arg - std::remainder(phase.back(), 2.0 * std::numbers::pi);
      step = std::remainder(step, 2.0 * std::numbers::pi);
      phase.push_back(phase.back() + step);
    }
  }

  const std::size_t m = report.samples.size();
  for (std::size_t i = 1; i + 1 < m; ++i) {
    auto& v = report.samples[i];
    v.phase_rate = (phase[i + 1] - phase[i - 1]) / (report.samples[i + 1].t - report.samples[i - 1].t);
    if (v.z_abs >= options.r_low && v.z_abs <= options.r_high) {
      const double err = std::abs(v.phase_rate - v.omega_predicted) / std::abs(v.omega_predicted);
      report.max_phase_rel_error = std::max(report.max_phase_rel_error, err);
      ++report.phase_samples;
    }
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& v : report.samples) {
    report.max_manifold_distance = std::max(report.max_manifold_distance, v.manifold_distance);
    report.max_projection_distance =
        std::max(report.max_projection_distance, v.projection_distance);
    report.max_radius_rel_error =
        std::max(report.max_radius_rel_error, std::abs(v.z_abs - v.z_abs_predicted) / v.z_abs_predicted);
    if (v.t < options.fit_begin - 1e-12 || v.t > options.fit_end + 1e-12 || v.z_abs <= 0.0) continue;
    const double y = std::log(v.z_abs);
    sx += v.t;
    sy += y;
    sxx += v.t * v.t;
    sxy += v.t * y;
    ++count;
  }
  if (count < 2) throw ValidationError("decay fit window holds fewer than two samples");
  report.decay_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  report.decay_slope_rel_error =
      std::abs(report.decay_slope - report.decay_rate_expected) / std::abs(report.decay_rate_expected);
  return report;
}

}  // namespace ssmbeam
