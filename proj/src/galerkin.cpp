#include "ssmbeam/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "ssmbeam/detail/trig_series.hpp"
#include "ssmbeam/errors.hpp"

namespace ssmbeam {

namespace {

using Vector = std::vector<double>;

// Mode-wise constants of the Galerkin system, evaluated once per integration.
class GalerkinSystem {
 public:
  GalerkinSystem(const BeamParameters& p, const ForcingProfile& forcing, const PolynomialForce& force,
                 int n_modes)
      : n_(n_modes), eps_(p.epsilon), omega_(forcing.omega), force_(force) {
    stiffness_.resize(n_);
    damping_.resize(n_);
    inv_mass_.resize(n_);
    load_.resize(n_);
    for (int k = 0; k < n_; ++k) {
      const double n = k + 1.0;
      stiffness_[k] = p.alpha * n * n * n * n + p.gamma;
      damping_[k] = p.beta * n * n + p.delta;
      inv_mass_[k] = 1.0 / (1.0 + p.mu * n * n);
      load_[k] = forcing.amplitude(k + 1);
    }
    for (const auto& [power, c] : force_.coefficients) {
      if (c != 0.0) has_force_ = true;
    }
  }

  void operator()(const Vector& y, Vector& dydt, double t) const {
    const std::span<const double> a(y.data(), n_);
    Vector f;
    if (has_force_) f = force_projection(a, force_);
    const double h = eps_ * std::cos(omega_ * t);
    for (int k = 0; k < n_; ++k) {
      const double b = y[n_ + k];
      double acc = -stiffness_[k] * y[k] - damping_[k] * b + h * load_[k];
      if (has_force_) acc += f[k];
      dydt[k] = b;
      dydt[n_ + k] = acc * inv_mass_[k];
    }
  }

  int n_modes() const { return n_; }

 private:
  int n_;
  double eps_;
  double omega_;
  PolynomialForce force_;
  bool has_force_ = false;
  Vector stiffness_, damping_, inv_mass_, load_;
};

Vector pack(const GalerkinState& s) {
  Vector y(s.a);
  y.insert(y.end(), s.b.begin(), s.b.end());
  return y;
}

GalerkinState unpack(const Vector& y, double t) {
  const std::size_t n = y.size() / 2;
  GalerkinState s;
  s.a.assign(y.begin(), y.begin() + n);
  s.b.assign(y.begin() + n, y.end());
  s.t = t;
  return s;
}

void require_finite(const Vector& y, double t) {
  for (double v : y) {
    if (!std::isfinite(v)) throw NumericalError("blow-up detected at t=" + std::to_string(t));
  }
}

// Classical RK4 from t0 to t1 in equal steps no longer than dt.
void rk4_span(const GalerkinSystem& sys, Vector& y, double t0, double t1, double dt) {
  if (t1 <= t0) return;
  const long steps = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9)));
  const double h = (t1 - t0) / static_cast<double>(steps);
  const std::size_t m = y.size();
  Vector k1(m), k2(m), k3(m), k4(m), tmp(m);
  for (long s = 0; s < steps; ++s) {
    const double t = t0 + static_cast<double>(s) * h;
    sys(y, k1, t);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    sys(tmp, k2, t + 0.5 * h);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    sys(tmp, k3, t + 0.5 * h);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
    sys(tmp, k4, t + h);
    for (std::size_t i = 0; i < m; ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  require_finite(y, t1);
}

Trajectory integrate_system(const GalerkinSystem& sys, const GalerkinConfig& config,
                            const GalerkinState& state0, std::span<const double> sample_times) {
  Vector y = pack(state0);
  double t = state0.t;
  Trajectory out;
  out.reserve(sample_times.size());

  if (config.integrator == Integrator::rk4) {
    for (double ts : sample_times) {
      if (ts < t) throw ValidationError("sample times must be increasing and >= initial time");
      rk4_span(sys, y, t, ts, config.dt);
      t = ts;
      out.push_back(unpack(y, t));
    }
    return out;
  }

  namespace odeint = boost::numeric::odeint;
  std::vector<double> times;
  times.push_back(t);
  for (double ts : sample_times) {
    if (ts < times.back()) throw ValidationError("sample times must be increasing and >= initial time");
    times.push_back(ts);
  }
  auto stepper = odeint::make_dense_output(config.abs_tol, config.rel_tol,
                                           odeint::runge_kutta_dopri5<Vector>());
  bool first = true;
  auto observer = [&](const Vector& x, double tx) {
    require_finite(x, tx);
    if (first) {
      first = false;
      return;
    }
    out.push_back(unpack(x, tx));
  };
  try {
    odeint::integrate_times(stepper, std::cref(sys), y, times.begin(), times.end(), config.dt,
                            observer, odeint::max_step_checker(10000000));
  } catch (const NumericalError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalError(std::string("adaptive integration failed: ") + e.what());
  }
  return out;
}

double sq(double x) { return x * x; }

}  // namespace

std::string to_string(Integrator integrator) {
  return integrator == Integrator::rk4 ? "rk4" : "adaptive";
}

Integrator parse_integrator(const std::string& text) {
  if (text == "rk4") return Integrator::rk4;
  if (text == "adaptive") return Integrator::adaptive;
  throw ValidationError("integrator must be 'rk4' or 'adaptive', got '" + text + "'");
}

void GalerkinConfig::validate() const {
  if (n_modes < 3) throw ValidationError("Galerkin truncation needs n_modes >= 3");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (integrator == Integrator::adaptive && !(abs_tol > 0.0 && rel_tol > 0.0)) {
    throw ValidationError("adaptive tolerances must be positive");
  }
}

GalerkinState GalerkinState::zero(int n_modes, double t) {
  GalerkinState s;
  s.a.assign(n_modes, 0.0);
  s.b.assign(n_modes, 0.0);
  s.t = t;
  return s;
}

double GalerkinState::norm() const {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  for (double v : b) acc += v * v;
  return std::sqrt(acc);
}

PolynomialForce PolynomialForce::cubic(double kappa) {
  PolynomialForce f;
  f.coefficients[3] = -kappa;
  return f;
}

void PolynomialForce::validate() const {
  for (const auto& [power, c] : coefficients) {
    if (power < 2) throw ValidationError("foundation force powers must be >= 2 (f(0) = f'(0) = 0)");
    if (!std::isfinite(c)) throw ValidationError("foundation force coefficients must be finite");
  }
}

std::vector<double> cubic_projection(std::span<const double> a, double kappa) {
  std::vector<double> out = detail::cube_on_sines<double>(a, a.size());
  for (double& v : out) v *= -kappa;
  return out;
}

std::vector<double> force_projection(std::span<const double> a, const PolynomialForce& force) {
  std::vector<double> out(a.size(), 0.0);
  if (force.coefficients.empty()) return out;
  // Build u^p incrementally for increasing p.
  detail::TrigSeries<double> power = detail::sine_power<double>(a, 1);
  int current = 1;
  for (const auto& [p, c] : force.coefficients) {
    while (current < p) {
      power = detail::times_sine(power, a);
      ++current;
    }
    if (c == 0.0) continue;
    const std::vector<double> proj = detail::project_on_sines(power, a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] += c * proj[k];
  }
  return out;
}

GalerkinState rhs(const BeamParameters& p, const ForcingProfile& forcing,
                  const PolynomialForce& force, const GalerkinState& state) {
  const GalerkinSystem sys(p, forcing, force, state.n_modes());
  const Vector y = pack(state);
  Vector dydt(y.size());
  sys(y, dydt, state.t);
  return unpack(dydt, state.t);
}

GalerkinState rhs(const BeamParameters& p, const ForcingProfile& forcing,
                  const GalerkinState& state) {
  return rhs(p, forcing, PolynomialForce::cubic(p.kappa), state);
}

Trajectory integrate(const BeamParameters& p, const ForcingProfile& forcing,
                     const PolynomialForce& force, const GalerkinConfig& config,
                     const GalerkinState& state0, std::span<const double> sample_times) {
  config.validate();
  force.validate();
  if (state0.n_modes() != config.n_modes || state0.b.size() != state0.a.size()) {
    throw ValidationError("initial state does not match n_modes");
  }
  const GalerkinSystem sys(p, forcing, force, config.n_modes);
  return integrate_system(sys, config, state0, sample_times);
}

Trajectory integrate(const BeamParameters& p, const ForcingProfile& forcing,
                     const GalerkinConfig& config, const GalerkinState& state0,
                     std::span<const double> sample_times) {
  return integrate(p, forcing, PolynomialForce::cubic(p.kappa), config, state0, sample_times);
}

Trajectory integrate(const BeamParameters& p, const ForcingProfile& forcing,
                     const GalerkinConfig& config, const GalerkinState& state0,
                     double t_final, double sample_dt) {
  if (!(sample_dt > 0.0)) throw ValidationError("sample_dt must be positive");
  if (t_final < state0.t) throw ValidationError("t_final precedes the initial time");
  std::vector<double> times;
  const long count = static_cast<long>(std::floor((t_final - state0.t) / sample_dt + 1e-9));
  for (long k = 1; k <= count; ++k) times.push_back(state0.t + static_cast<double>(k) * sample_dt);
  if (times.empty() || times.back() < t_final - 1e-12) times.push_back(t_final);
  Trajectory out{state0};
  Trajectory rest = integrate(p, forcing, config, state0, times);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

GalerkinState linear_flow_exact(const BeamParameters& p, const GalerkinState& state0, double t) {
  GalerkinState out = GalerkinState::zero(state0.n_modes(), state0.t + t);
  for (int k = 0; k < state0.n_modes(); ++k) {
    const EigenPair e = eigenvalues(p, k + 1);
    const cplx lp = e.lambda_plus;
    const cplx lm = e.lambda_minus;
    if (std::abs(lp - lm) <= 1e-12 * std::abs(lp)) {
      throw ResonanceError("defective mode " + std::to_string(k + 1) +
                           ": equal eigenvalues, two-exponential formula undefined");
    }
    const cplx ep = std::exp(lp * t);
    const cplx em = std::exp(lm * t);
    const cplx inv = 1.0 / (lm - lp);
    const double u0 = state0.a[k];
    const double v0 = state0.b[k];
    out.a[k] = (inv * ((lm * ep - lp * em) * u0 + (em - ep) * v0)).real();
    out.b[k] = (inv * (lp * lm * (ep - em) * u0 + (lm * em - lp * ep) * v0)).real();
  }
  return out;
}

EnergyReport energy(const BeamParameters& p, const PolynomialForce& force,
                    const GalerkinState& state) {
  EnergyReport e;
  const double w = 0.5 * kSineNormSquared;
  for (int k = 0; k < state.n_modes(); ++k) {
    const double n = k + 1.0;
    e.kinetic += w * sq(state.b[k]);
    e.rotary += w * p.mu * n * n * sq(state.b[k]);
    e.bending += w * p.alpha * n * n * n * n * sq(state.a[k]);
    e.foundation += w * p.gamma * sq(state.a[k]);
  }
  // -int F(u) dx with F(u) = sum_p c_p u^{p+1} / (p + 1).
  const std::span<const double> a(state.a);
  detail::TrigSeries<double> power = detail::sine_power<double>(a, 1);
  int current = 1;
  for (const auto& [pw, c] : force.coefficients) {
    while (current < pw + 1) {
      power = detail::times_sine(power, a);
      ++current;
    }
    e.potential_f -= c / (pw + 1.0) * detail::integral(power);
  }
  e.total = e.kinetic + e.rotary + e.bending + e.foundation + e.potential_f;
  return e;
}

EnergyReport energy(const BeamParameters& p, const GalerkinState& state) {
  return energy(p, PolynomialForce::cubic(p.kappa), state);
}

double energy_space_norm_squared(const BeamParameters& p, const GalerkinState& state) {
  double acc = 0.0;
  for (int k = 0; k < state.n_modes(); ++k) {
    const double n = k + 1.0;
    acc += (p.alpha * n * n * n * n + p.gamma) / (1.0 + p.mu * n * n) * sq(state.a[k]) +
           sq(state.b[k]);
  }
  return acc;
}

GalerkinState poincare_map(const BeamParameters& p, const ForcingProfile& forcing,
                           const GalerkinConfig& config, const GalerkinState& state,
                           double theta0) {
  config.validate();
  const double t0 = theta0 / forcing.omega;
  const double period = 2.0 * std::numbers::pi / forcing.omega;
  GalerkinState start = state;
  start.t = t0;
  const double end[] = {t0 + period};
  GalerkinState out = integrate(p, forcing, config, start, end).front();
  out.t = t0;
  return out;
}

PoincareResult poincare_fixed_point(const BeamParameters& p, const ForcingProfile& forcing,
                                    const GalerkinConfig& config, double theta0,
                                    const PoincareOptions& options) {
  config.validate();
  forcing.validate();
  const int n = config.n_modes;
  const int dim = 2 * n;
  const double t0 = theta0 / forcing.omega;

  const PeriodicOrbit seed = linear_periodic_response(p, forcing, p.epsilon);
  auto [a0, b0] = seed.state_at(t0, n);
  GalerkinState u;
  u.a = a0;
  u.b = b0;
  u.t = t0;

  auto as_vector = [&](const GalerkinState& s) {
    Eigen::VectorXd v(dim);
    for (int k = 0; k < n; ++k) {
      v[k] = s.a[k];
      v[n + k] = s.b[k];
    }
    return v;
  };
  auto from_vector = [&](const Eigen::VectorXd& v) {
    GalerkinState s = GalerkinState::zero(n, t0);
    for (int k = 0; k < n; ++k) {
      s.a[k] = v[k];
      s.b[k] = v[n + k];
    }
    return s;
  };

  Eigen::VectorXd x = as_vector(u);
  Eigen::VectorXd fx = as_vector(poincare_map(p, forcing, config, u, theta0)) - x;
  double residual = fx.norm();
  int iterations = 0;
  while (!(residual < options.tol)) {
    if (iterations >= options.max_iterations) {
      throw NumericalError("Poincare Newton stagnated after " + std::to_string(iterations) +
                           " iterations, residual " + std::to_string(residual));
    }
    Eigen::MatrixXd jac(dim, dim);
    for (int j = 0; j < dim; ++j) {
      Eigen::VectorXd xp = x;
      xp[j] += options.fd_step;
      const Eigen::VectorXd fp =
          as_vector(poincare_map(p, forcing, config, from_vector(xp), theta0)) - xp;
      jac.col(j) = (fp - fx) / options.fd_step;
    }
    const Eigen::VectorXd step = jac.partialPivLu().solve(-fx);
    if (!step.allFinite()) throw NumericalError("Poincare Newton produced a non-finite step");
    x += step;
    fx = as_vector(poincare_map(p, forcing, config, from_vector(x), theta0)) - x;
    residual = fx.norm();
    ++iterations;
  }
  return {from_vector(x), iterations, residual};
}

}  // namespace ssmbeam
