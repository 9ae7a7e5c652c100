#include "ssmbeam/forced_ssm.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "ssm_internal.hpp"
#include "ssmbeam/errors.hpp"

namespace ssmbeam {

namespace {

using Real = long double;
using CxL = detail::Cx<Real>;

// theta-collapsed K^0 + eps K^1(theta) and omega d_theta (eps K^1) as polynomial tables.
void collapse(const ForcedSsm& ssm, double theta, double epsilon, detail::PolyTable<Real>& k,
              detail::PolyTable<Real>& k_theta) {
  k = detail::promote_table<Real>(ssm.base_table);
  k_theta.clear();
  const Real eps = epsilon;
  const Real om = ssm.model.omega;
  for (const auto& [index, harmonics] : ssm.first_order.entries) {
    for (const auto& [key, c] : harmonics) {
      const auto [mode, j] = key;
      const CxL phase = std::polar(Real(1), static_cast<Real>(j) * static_cast<Real>(theta));
      const CxL plus = detail::promote<Real>(c.plus) * phase * eps;
      const CxL minus = detail::promote<Real>(c.minus) * phase * eps;
      auto& slot = k[index][mode];
      slot.plus += plus;
      slot.minus += minus;
      const CxL d = CxL(0, static_cast<Real>(j)) * om;
      auto& ds = k_theta[index][mode];
      ds.plus += d * plus;
      ds.minus += d * minus;
    }
  }
}

std::vector<detail::Pair2<Real>> forced_defect(const BeamParameters& p, const ForcedSsm& ssm,
                                               const std::vector<CxL>& lambdas, cplx z,
                                               double theta, double epsilon, int n_modes) {
  detail::PolyTable<Real> k, k_theta;
  collapse(ssm, theta, epsilon, k, k_theta);
  const CxL zz = detail::promote<Real>(z);
  const auto jet = detail::polynomial_jet<Real>(k, zz, n_modes);
  const auto dtheta = detail::polynomial_jet<Real>(k_theta, zz, n_modes);
  const ForcedReducedModel& m = ssm.model;
  const CxL l1 = detail::promote<Real>(m.base.lambda1);
  const CxL r0 = detail::promote<Real>(m.base.R0);
  const CxL force = detail::promote<Real>(m.forcing_coeff) *
                    static_cast<Real>(std::cos(static_cast<Real>(theta))) *
                    static_cast<Real>(epsilon);
  const CxL zdot = l1 * zz + r0 * zz * zz * std::conj(zz) - force;
  auto defect = detail::conjugacy_defect<Real>(p, ssm.base_table.scaling, lambdas, jet, zdot);
  // + eps h in eigen coordinates on mode 1: force * (-1, 1)
  defect[0].plus -= force;
  defect[0].minus += force;
  for (int q = 0; q < n_modes; ++q) {
    defect[q].plus -= dtheta.value[q].plus;
    defect[q].minus -= dtheta.value[q].minus;
  }
  return defect;
}

}  // namespace

EigenCoords ForcedReducedModel::R1_0(double theta) const {
  const cplx c = forcing_coeff * std::cos(theta);
  return {-c, c};
}

double ForcedReducedModel::period() const { return 2.0 * std::numbers::pi / omega; }

EigenCoords FirstOrderTable::coefficient(IndexPair index, int mode, int harmonic) const {
  const auto it = entries.find(index);
  if (it == entries.end()) return {};
  const auto jt = it->second.find({mode, harmonic});
  return jt == it->second.end() ? EigenCoords{} : jt->second;
}

CoefficientTable FirstOrderTable::at_theta(double theta, const std::map<int, cplx>& lambdas,
                                           MassScaling scaling) const {
  CoefficientTable out;
  out.lambdas = lambdas;
  out.scaling = scaling;
  for (const auto& [index, harmonics] : entries) {
    for (const auto& [key, c] : harmonics) {
      const cplx phase = std::polar(1.0, key.second * theta);
      auto& slot = out.entries[index][key.first];
      slot.plus += c.plus * phase;
      slot.minus += c.minus * phase;
    }
  }
  return out;
}

ForcedSsm first_order_coefficients(const BeamParameters& p, const ForcingProfile& forcing,
                                   const UnforcedSsm& unforced, double denominator_tol) {
  forcing.validate();
  for (const auto& [mode, amp] : forcing.modal_amplitudes) {
    if (mode != 1 && amp != 0.0) {
      throw ValidationError("first-order forced manifold supports forcing on sine mode 1 only");
    }
  }
  const CoefficientTable& k0 = unforced.table;
  const cplx l1 = unforced.model.lambda1;
  const cplx l1b = std::conj(l1);
  const double threshold = denominator_tol * std::abs(l1);

  ForcedSsm out;
  out.base_table = k0;
  ForcedReducedModel& m = out.model;
  m.base = unforced.model;
  m.epsilon = p.epsilon;
  m.omega = forcing.omega;
  m.forcing_coeff = mass_factor(p, 1, k0.scaling) * forcing.amplitude(1) / (l1b - l1);

  // R^1 components per harmonic j = +-1 (cos theta = (e^{i theta} + e^{-i theta}) / 2).
  const cplx r1_first = -m.forcing_coeff / 2.0;
  const cplx r1_second = m.forcing_coeff / 2.0;

  const IndexPair order_two[] = {{2, 0}, {1, 1}, {0, 2}};
  for (const IndexPair idx : order_two) {
    const int a = idx.n1;
    const int b = idx.n2;
    HarmonicCoefficients harmonics;
    for (const auto& [mode, lam] : k0.lambdas) {
      const EigenCoords up1 = k0.coefficient({a + 1, b}, mode);
      const EigenCoords up2 = k0.coefficient({a, b + 1}, mode);
      const cplx rhs_plus = double(a + 1) * up1.plus * r1_first + double(b + 1) * up2.plus * r1_second;
      const cplx rhs_minus =
          double(a + 1) * up1.minus * r1_first + double(b + 1) * up2.minus * r1_second;
      for (int j : {-1, 1}) {
        const cplx shift = double(a) * l1 + double(b) * l1b + cplx(0.0, j * forcing.omega);
        const cplx den_plus = lam - shift;
        const cplx den_minus = std::conj(lam) - shift;
        for (const cplx den : {den_plus, den_minus}) {
          if (!(std::abs(den) > threshold)) {
            throw ResonanceError("small denominator lambda" + std::to_string(mode) + " - (" +
                                 std::to_string(a) + " lambda1 + " + std::to_string(b) +
                                 " conj(lambda1)) - i(" + std::to_string(j) + ")omega");
          }
        }
        harmonics[{mode, j}] = {rhs_plus / den_plus, rhs_minus / den_minus};
      }
    }
    out.first_order.entries[idx] = std::move(harmonics);
  }
  return out;
}

cplx forced_reduced_vector_field(const ForcedReducedModel& model, cplx z, double theta) {
  return reduced_vector_field(model.base, z) + model.epsilon * model.R1_0(theta).plus;
}

PolarRates forced_polar_rates(const ForcedReducedModel& model, double r, double phi,
                              double theta) {
  if (r < 1e-6) throw ValidationError("polar form undefined for r < 1e-6; use the Cartesian field");
  const double A = model.base.A_real();
  const cplx f = model.epsilon * model.R1_0(theta).plus * std::polar(1.0, -phi);
  return {A * r + f.real(), model.base.omega_inst(r) + f.imag() / r};
}

cplx stroboscopic_map(const ForcedReducedModel& model, cplx z0, double theta0,
                      const StroboscopicOptions& options) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const double omega = model.omega;
  auto field = [&](const State& x, State& dx, double t) {
    const cplx w = forced_reduced_vector_field(model, {x[0], x[1]}, theta0 + omega * t);
    dx[0] = w.real();
    dx[1] = w.imag();
  };
  State x{z0.real(), z0.imag()};
  try {
    auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, field, x, 0.0, model.period(), model.period() / 64.0);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("stroboscopic integration failed: ") + e.what());
  }
  if (!std::isfinite(x[0]) || !std::isfinite(x[1])) {
    throw NumericalError("stroboscopic integration produced a non-finite state");
  }
  return {x[0], x[1]};
}

std::vector<cplx> stroboscopic_samples(const ForcedReducedModel& model, cplx z0, double theta0,
                                       int count, const StroboscopicOptions& options) {
  if (count < 0) throw ValidationError("sample count must be non-negative");
  std::vector<cplx> out{z0};
  for (int k = 0; k < count; ++k) out.push_back(stroboscopic_map(model, out.back(), theta0, options));
  return out;
}

StroboscopicFixedPoint stroboscopic_fixed_point(const ForcedReducedModel& model, double theta0,
                                                int max_iterations,
                                                const StroboscopicOptions& options) {
  const double h = 1e-7;
  auto defect = [&](cplx z) { return stroboscopic_map(model, z, theta0, options) - z; };
  cplx z = 0.0;
  cplx f = defect(z);
  for (int it = 1; it <= max_iterations; ++it) {
    const cplx fx = (defect(z + h) - f) / h;
    const cplx fy = (defect(z + cplx(0.0, h)) - f) / h;
    // Solve [Re fx Re fy; Im fx Im fy] d = -f.
    const double det = fx.real() * fy.imag() - fy.real() * fx.imag();
    if (det == 0.0 || !std::isfinite(det)) throw NumericalError("singular stroboscopic Jacobian");
    const double dx = (-f.real() * fy.imag() + fy.real() * f.imag()) / det;
    const double dy = (-fx.real() * f.imag() + fx.imag() * f.real()) / det;
    cplx step(dx, dy);
    double scale = 1.0;
    cplx trial = z + step;
    cplx ft = defect(trial);
    while (std::abs(ft) > std::abs(f) && scale > 1.0 / 64.0) {
      scale /= 2.0;
      trial = z + scale * step;
      ft = defect(trial);
    }
    z = trial;
    f = ft;
    const double moved = std::abs(scale * step);
    if (moved < 1e-12) return {z, it, moved};
  }
  throw NumericalError("stroboscopic Newton did not converge in " +
                       std::to_string(max_iterations) + " iterations");
}

double epsilon_residual(const BeamParameters& p, const ForcedSsm& ssm, cplx z, double theta,
                        double epsilon, int n_modes) {
  if (n_modes < 3) throw ValidationError("epsilon residual needs n_modes >= 3");
  // Res(eps) - Res(0) component-wise, so the eps^0 truncation error drops out.
  const auto lambdas = detail::mode_lambdas<Real>(p, ssm.base_table.lambdas, n_modes);
  auto with = forced_defect(p, ssm, lambdas, z, theta, epsilon, n_modes);
  const auto without = forced_defect(p, ssm, lambdas, z, theta, 0.0, n_modes);
  for (int q = 0; q < n_modes; ++q) {
    with[q].plus -= without[q].plus;
    with[q].minus -= without[q].minus;
  }
  return static_cast<double>(detail::modal_norm<Real>(lambdas, with));
}

}  // namespace ssmbeam
