#include "ssmbeam/ssm_unforced.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ssm_internal.hpp"
#include "ssmbeam/errors.hpp"

namespace ssmbeam {

namespace {

class DenominatorGuard {
 public:
  DenominatorGuard(cplx lambda1, double tol) : threshold_(tol * std::abs(lambda1)) {}

  cplx operator()(cplx d, const std::string& name) const {
    if (!(std::abs(d) > threshold_)) {
      throw ResonanceError("small denominator " + name + " (|" + name +
                           "| = " + std::to_string(std::abs(d)) + ")");
    }
    return d;
  }

 private:
  double threshold_;
};

EigenCoords mirrored(const EigenCoords& c) { return {std::conj(c.minus), std::conj(c.plus)}; }

}  // namespace

EigenCoords CoefficientTable::coefficient(IndexPair index, int mode) const {
  const auto it = entries.find(index);
  if (it == entries.end()) return {};
  const auto jt = it->second.find(mode);
  return jt == it->second.end() ? EigenCoords{} : jt->second;
}

int CoefficientTable::max_mode() const {
  int m = 0;
  for (const auto& [index, modes] : entries) {
    if (!modes.empty()) m = std::max(m, modes.rbegin()->first);
  }
  return m;
}

UnforcedSsm build_ssm(const BeamParameters& p, const SsmBuildOptions& options) {
  p.validate();
  const AssumptionReport report = check_assumptions(p, 3);
  if (!report.parameter_inequalities()) {
    throw ValidationError("parameter inequalities fail: slow manifold construction needs "
                          "beta^2 < 4 alpha, 2 beta delta < 4 gamma mu, delta^2 < 4 gamma, "
                          "delta mu < beta");
  }
  const EigenPair e1 = eigenvalues(p, 1);
  const EigenPair e3 = eigenvalues(p, 3);
  if (!e1.underdamped() || !e3.underdamped()) {
    throw ValidationError("modes 1 and 3 must be underdamped (Im lambda != 0)");
  }
  const cplx l1 = e1.lambda_plus;
  const cplx l3 = e3.lambda_plus;
  const cplx l1b = std::conj(l1);
  const cplx l3b = std::conj(l3);
  const DenominatorGuard guard(l1, options.denominator_tol);

  const double c1 = p.kappa * mass_factor(p, 1, options.scaling);
  const double c3 = p.kappa * mass_factor(p, 3, options.scaling);
  const cplx d1 = guard(l1b - l1, "conj(lambda1)-lambda1");
  const cplx d3 = guard(l3b - l3, "conj(lambda3)-lambda3");

  const cplx den_2l1 = guard(2.0 * l1, "2*lambda1");
  const cplx den_l1b_3l1 = guard(l1b - 3.0 * l1, "conj(lambda1)-3*lambda1");
  const cplx den_l3_3l1 = guard(l3 - 3.0 * l1, "lambda3-3*lambda1");
  const cplx den_3l1_l3b = guard(3.0 * l1 - l3b, "3*lambda1-conj(lambda3)");
  const cplx den_l3_2l1_l1b = guard(l3 - 2.0 * l1 - l1b, "lambda3-2*lambda1-conj(lambda1)");
  const cplx den_l1b_2l1_l3b = guard(l1b + 2.0 * l1 - l3b, "conj(lambda1)+2*lambda1-conj(lambda3)");

  UnforcedSsm out;
  CoefficientTable& t = out.table;
  t.scaling = options.scaling;
  t.lambdas = {{1, l1}, {3, l3}};

  t.entries[{1, 0}][1] = {1.0, 0.0};
  t.entries[{0, 1}][1] = {0.0, 1.0};
  t.entries[{2, 0}][1] = {};
  t.entries[{1, 1}][1] = {};
  t.entries[{0, 2}][1] = {};

  const cplx g1 = 3.0 * c1 / (4.0 * d1);
  const cplx g3 = c3 / (4.0 * d3);
  const EigenCoords k30_1{g1 / den_2l1, g1 / den_l1b_3l1};
  const EigenCoords k30_3{g3 / den_l3_3l1, g3 / den_3l1_l3b};
  const cplx R0 = 9.0 * c1 / (4.0 * d1);
  const EigenCoords k21_1{0.0, -9.0 * c1 / (8.0 * l1 * d1)};
  const EigenCoords k21_3{3.0 * g3 / den_l3_2l1_l1b, 3.0 * g3 / den_l1b_2l1_l3b};

  t.entries[{3, 0}] = {{1, k30_1}, {3, k30_3}};
  t.entries[{2, 1}] = {{1, k21_1}, {3, k21_3}};
  t.entries[{1, 2}] = {{1, mirrored(k21_1)}, {3, mirrored(k21_3)}};
  t.entries[{0, 3}] = {{1, mirrored(k30_1)}, {3, mirrored(k30_3)}};

  out.model.lambda1 = l1;
  out.model.R0 = R0;
  return out;
}

ParametrizationJet parametrization_jet(const CoefficientTable& table, cplx z, int n_modes) {
  if (n_modes <= 0) n_modes = table.max_mode();
  const auto jet =
      detail::polynomial_jet<double>(detail::promote_table<double>(table), z, n_modes);
  ParametrizationJet out;
  for (int k = 0; k < n_modes; ++k) {
    out.value.push_back({jet.value[k].plus, jet.value[k].minus});
    out.d_z.push_back({jet.d_z[k].plus, jet.d_z[k].minus});
    out.d_zbar.push_back({jet.d_zbar[k].plus, jet.d_zbar[k].minus});
  }
  return out;
}

std::vector<ModalPair> evaluate_parametrization(const CoefficientTable& table, cplx z,
                                                int n_modes) {
  if (n_modes <= 0) n_modes = table.max_mode();
  const ParametrizationJet jet = parametrization_jet(table, z, n_modes);
  std::vector<ModalPair> out(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const EigenCoords& c = jet.value[k];
    if (c.plus == 0.0 && c.minus == 0.0) continue;
    const auto it = table.lambdas.find(k + 1);
    if (it == table.lambdas.end()) {
      throw ValidationError("coefficient table lacks the eigenvalue of mode " +
                            std::to_string(k + 1));
    }
    const cplx lam = it->second;
    out[k] = {c.plus + c.minus, lam * c.plus + std::conj(lam) * c.minus};
  }
  return out;
}

double invariance_residual(const BeamParameters& p, const CoefficientTable& table,
                           const ReducedModel& model, cplx z, int n_modes) {
  using Real = long double;
  if (n_modes < 3) throw ValidationError("invariance residual needs n_modes >= 3");
  const auto lambdas = detail::mode_lambdas<Real>(p, table.lambdas, n_modes);
  const detail::Cx<Real> zz = detail::promote<Real>(z);
  const auto jet = detail::polynomial_jet<Real>(detail::promote_table<Real>(table), zz, n_modes);
  const detail::Cx<Real> l1 = detail::promote<Real>(model.lambda1);
  const detail::Cx<Real> r0 = detail::promote<Real>(model.R0);
  const detail::Cx<Real> zdot = l1 * zz + r0 * zz * zz * std::conj(zz);
  const auto defect = detail::conjugacy_defect<Real>(p, table.scaling, lambdas, jet, zdot);
  return static_cast<double>(detail::modal_norm<Real>(lambdas, defect));
}

cplx reduced_vector_field(const ReducedModel& model, cplx z) {
  return model.lambda1 * z + model.R0 * z * z * std::conj(z);
}

PolarPoint reduced_flow_closed_form(const ReducedModel& model, double r0, double theta0,
                                    double t) {
  const double A = model.A_real();
  if (!(A < 0.0)) throw ValidationError("closed-form reduced flow requires Re lambda1 < 0");
  if (r0 < 0.0) throw ValidationError("r0 must be non-negative");
  const double grow = std::exp(A * t);
  const double phase =
      theta0 + model.B_imag() * t + model.R0.imag() * r0 * r0 / (2.0 * A) * (grow * grow - 1.0);
  return {grow * r0, phase};
}

std::string to_string(AmpNorm norm) {
  return norm == AmpNorm::state ? "state" : "displacement";
}

AmpNorm parse_amp_norm(const std::string& text) {
  if (text == "state") return AmpNorm::state;
  if (text == "displacement") return AmpNorm::displacement;
  throw ValidationError("amp_norm must be 'state' or 'displacement', got '" + text + "'");
}

double nominal_amplitude(const CoefficientTable& table, double r, AmpNorm norm,
                         int theta_samples) {
  if (theta_samples < 1) throw ValidationError("theta_samples must be positive");
  if (r < 0.0) throw ValidationError("backbone radius must be non-negative");
  double acc = 0.0;
  for (int s = 0; s < theta_samples; ++s) {
    const double theta = 2.0 * std::numbers::pi * s / theta_samples;
    const auto state = evaluate_parametrization(table, std::polar(r, theta));
    for (const ModalPair& m : state) {
      acc += std::norm(m.u);
      if (norm == AmpNorm::state) acc += std::norm(m.v);
    }
  }
  return std::sqrt(acc / theta_samples);
}

std::vector<BackbonePoint> backbone(const ReducedModel& model, const CoefficientTable& table,
                                    std::span<const double> r_grid, AmpNorm norm,
                                    int theta_samples) {
  std::vector<BackbonePoint> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ValidationError("backbone radii must be finite and non-negative");
    }
    out.push_back({r, model.omega_inst(r), nominal_amplitude(table, r, norm, theta_samples)});
  }
  return out;
}

ModeCoefficients cubic_eigenbasis_projection(const BeamParameters& p, cplx z,
                                             MassScaling scaling) {
  const cplx l1 = eigenvalues(p, 1).lambda_plus;
  const cplx l3 = eigenvalues(p, 3).lambda_plus;
  const cplx s = z + std::conj(z);
  const cplx cube = s * s * s;
  const cplx m1 = 3.0 * p.kappa * mass_factor(p, 1, scaling) / 4.0 * cube / (std::conj(l1) - l1);
  const cplx m3 = -p.kappa * mass_factor(p, 3, scaling) / 4.0 * cube / (std::conj(l3) - l3);
  return {{1, {m1, -m1}}, {3, {m3, -m3}}};
}

}  // namespace ssmbeam
