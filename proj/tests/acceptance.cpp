// Runs every acceptance criterion once and prints one PASS/FAIL line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "oracles.hpp"
#include "ssmbeam/forced_ssm.hpp"
#include "ssmbeam/forcing.hpp"
#include "ssmbeam/galerkin.hpp"
#include "ssmbeam/model.hpp"
#include "ssmbeam/ssm_unforced.hpp"
#include "ssmbeam/validation.hpp"

using namespace ssmbeam;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

GalerkinConfig rk4(int n, double dt) {
  GalerkinConfig c;
  c.n_modes = n;
  c.dt = dt;
  return c;
}

double max_diff(const GalerkinState& x, const GalerkinState& y) {
  double d = 0.0;
  for (int k = 0; k < x.n_modes(); ++k) {
    d = std::max({d, std::abs(x.a[k] - y.a[k]), std::abs(x.b[k] - y.b[k])});
  }
  return d;
}

Outcome ac1() {
  const EigenPair e = eigenvalues(oracle::reference_beam(), 1);
  const double dre = std::abs(e.lambda_plus.real() + 0.275);
  const double dim = std::abs(std::abs(e.lambda_plus.imag()) - 0.9614);
  const bool conj = e.lambda_minus == std::conj(e.lambda_plus);
  return {dre < 1e-3 && dim < 1e-3 && conj,
          "lambda1 = " + fmt("%.6f", e.lambda_plus.real()) + " +- " +
              fmt("%.6f", e.lambda_plus.imag()) + "i"};
}

Outcome ac2() {
  BeamParameters p;
  p.beta = 0.08;
  p.delta = 0.04;
  p.mu = 0.5;
  p.gamma = 1.0;
  const double re = eigenvalues(p, 1000).lambda_plus.real();
  return {std::abs(re + 0.08) < 1e-3 && real_part_limit(p) == -0.08,
          "Re lambda_1000 = " + fmt("%.8f", re)};
}

Outcome ac3() {
  BeamParameters p;
  p.delta = 0.05;
  p.mu = 0.2;
  p.beta = quotient_four_beta(p.delta, p.mu);
  p.gamma = 1.0;
  const int q = spectral_quotient(p, 1);
  return {q == 4, "q = " + std::to_string(q)};
}

Outcome ac4() {
  const std::vector<double> e1{1.0, 0.0, 0.0, 0.0, 0.0};
  const auto c = cubic_projection(e1, 1.0);
  const bool exact = c[0] == -0.75 && c[1] == 0.0 && c[2] == 0.25 && c[3] == 0.0 && c[4] == 0.0;
  return {exact, "coefficients (" + fmt("%.17g", c[0]) + ", " + fmt("%.17g", c[1]) + ", " +
                     fmt("%.17g", c[2]) + ", " + fmt("%.17g", c[3]) + ")"};
}

Outcome ac5() {
  const BeamParameters p = oracle::reference_beam();
  const UnforcedSsm s = build_ssm(p);
  double worst = 1e9;
  for (double phase : {0.0, 0.7, 1.9, 3.3}) {
    std::vector<double> r, res;
    for (int k = 0; k <= 8; ++k) {
      r.push_back(1e-4 * std::pow(10.0, k / 4.0));
      res.push_back(invariance_residual(p, s.table, s.model, std::polar(r.back(), phase), 16));
    }
    worst = std::min(worst, ls_slope(r, res));
  }
  return {worst >= 3.9, "min fitted slope over phases = " + fmt("%.4f", worst) + " (N = 16)"};
}

Outcome ac6() {
  namespace odeint = boost::numeric::odeint;
  const UnforcedSsm s = build_ssm(oracle::reference_beam());
  const ReducedModel m = s.model;
  using State = std::array<double, 2>;
  State x{0.3, 0.0};
  auto rhs = [&](const State& y, State& dy, double) {
    dy[0] = m.A_real() * y[0];
    dy[1] = m.omega_inst(y[0]);
  };
  auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
  std::vector<double> times;
  for (int k = 0; k <= 1000; ++k) times.push_back(0.05 * k);
  double worst = 0.0;
  odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-3,
                          [&](const State& y, double t) {
                            const PolarPoint c = reduced_flow_closed_form(m, 0.3, 0.0, t);
                            worst = std::max({worst, std::abs(c.r - y[0]), std::abs(c.theta - y[1])});
                          });
  return {worst < 1e-8, "max |closed form - ODE| = " + fmt("%.3e", worst) + " (theta uses r0^2)"};
}

Outcome ac7() {
  const UnforcedSsm s = build_ssm(oracle::reference_beam());
  const double r = 1e-3;
  const double state = nominal_amplitude(s.table, r, AmpNorm::state, 256);
  const double disp = nominal_amplitude(s.table, r, AmpNorm::displacement, 256);
  const double err = std::abs(state / (2.0 * r) - 1.0);
  return {err < 0.01, "convention amp_norm=state: Amp/(2r) - 1 = " + fmt("%.3e", err) +
                          "; displacement gives Amp/r = " + fmt("%.6f", disp / r)};
}

Outcome ac8() {
  BeamParameters p = oracle::reference_beam();
  p.kappa = 0.0;
  oracle::Rng rng(2024);
  GalerkinState s = GalerkinState::zero(16);
  for (int k = 0; k < 16; ++k) {
    s.a[k] = rng.uniform(-1, 1) / (k + 1);
    s.b[k] = rng.uniform(-1, 1) / (k + 1);
  }
  const double end[] = {1.0};
  const GalerkinState exact = linear_flow_exact(p, s, 1.0);
  const double e_fine = max_diff(integrate(p, {}, rk4(16, 1e-4), s, end).front(), exact);
  const double e_coarse = max_diff(integrate(p, {}, rk4(16, 2e-4), s, end).front(), exact);
  const double ratio = e_coarse / e_fine;
  return {e_fine < 1e-10 && ratio >= 12.0,
          "error(dt=1e-4) = " + fmt("%.3e", e_fine) + ", halving ratio = " + fmt("%.2f", ratio)};
}

Outcome ac9() {
  const BeamParameters p = oracle::reference_beam();
  oracle::Rng rng(9);
  GalerkinState s = GalerkinState::zero(16);
  for (int k = 0; k < 16; ++k) {
    s.a[k] = rng.uniform(-1, 1) / ((k + 1) * (k + 1));
    s.b[k] = rng.uniform(-1, 1) / ((k + 1) * (k + 1));
  }
  const double scale = 0.1 / s.norm();
  for (double& v : s.a) v *= scale;
  for (double& v : s.b) v *= scale;
  const Trajectory tr = integrate(p, {}, rk4(16, 1e-3), s, 50.0, 0.01);
  double prev = energy(p, tr.front()).total;
  double worst_rise = -1e300;
  for (std::size_t k = 1; k < tr.size(); ++k) {
    const double e = energy(p, tr[k]).total;
    worst_rise = std::max(worst_rise, e - prev);
    prev = e;
  }
  return {worst_rise <= 1e-10, std::to_string(tr.size()) + " samples, largest step increase = " +
                                   fmt("%.3e", worst_rise)};
}

Outcome ac10() {
  const BeamParameters p = oracle::reference_beam();
  const UnforcedSsm s = build_ssm(p);
  const SsmValidationReport r = validate_ssm(p, s.table, s.model, rk4(16, 1e-3), 0.05);
  const bool ok = r.decay_slope_rel_error < 0.02 && r.phase_samples > 0 && r.max_phase_rel_error < 0.02;
  return {ok, "decay slope " + fmt("%.6f", r.decay_slope) + " vs A = " +
                  fmt("%.6f", r.decay_rate_expected) + " (rel " + fmt("%.2e", r.decay_slope_rel_error) +
                  "), max phase-rate rel error " + fmt("%.2e", r.max_phase_rel_error) + " over " +
                  std::to_string(r.phase_samples) + " samples"};
}

Outcome ac11() {
  BeamParameters p = oracle::reference_beam();
  p.omega = 1.3;
  const ForcedSsm s =
      first_order_coefficients(p, ForcingProfile::single_mode(1.3), build_ssm(p));
  std::vector<double> eps, res;
  for (int k = 0; k <= 4; ++k) {
    eps.push_back(1e-4 * std::pow(10.0, k / 2.0));
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        const double theta = 2.0 * std::numbers::pi * i / 8.0;
        const cplx z = std::polar(0.01, 2.0 * std::numbers::pi * j / 8.0 + 0.1);
        worst = std::max(worst, epsilon_residual(p, s, z, theta, eps.back(), 16));
      }
    }
    res.push_back(worst);
  }
  const double slope = ls_slope(eps, res);
  return {slope >= 1.9, "fitted slope = " + fmt("%.4f", slope) + " at |z| = 0.01"};
}

Outcome ac12() {
  const ForcingProfile f = ForcingProfile::single_mode(1.3);
  const GalerkinConfig cfg = rk4(16, 1e-3);
  PoincareOptions opt;
  opt.tol = 1e-14;
  opt.max_iterations = 10;
  auto distance = [&](double eps, int& iterations) {
    BeamParameters p = oracle::reference_beam();
    p.omega = 1.3;
    p.epsilon = eps;
    const PoincareResult r = poincare_fixed_point(p, f, cfg, 0.0, opt);
    iterations = r.iterations;
    const auto [a, b] = linear_periodic_response(p, f, eps).state_at(0.0, 16);
    double d = 0.0;
    for (int k = 0; k < 16; ++k) {
      d += (r.state.a[k] - a[k]) * (r.state.a[k] - a[k]) + (r.state.b[k] - b[k]) * (r.state.b[k] - b[k]);
    }
    return std::sqrt(d);
  };
  int it1 = 0, it2 = 0;
  const double d1 = distance(1e-3, it1);
  const double d2 = distance(5e-4, it2);
  const double slope = std::log2(d1 / d2);
  return {it1 <= 10 && it2 <= 10 && slope >= 2.5,
          "Newton iterations " + std::to_string(it1) + "/" + std::to_string(it2) +
              ", distance " + fmt("%.3e", d1) + " -> " + fmt("%.3e", d2) + ", slope " +
              fmt("%.3f", slope)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // <= 0 means no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "spectrum reproduction", 1e-3, ac1},
      {2, "real-part limit", 1e-3, ac2},
      {3, "spectral quotient", 1e-3, ac3},
      {4, "cubic identity", 0.0, ac4},
      {5, "invariance-residual order", 1.0, ac5},
      {6, "closed-form reduced flow vs ODE", 1.0, ac6},
      {7, "backbone leading order", 1.0, ac7},
      {8, "Galerkin linear oracle", 5.0, ac8},
      {9, "energy dissipation", 10.0, ac9},
      {10, "full-model SSM validation", 30.0, ac10},
      {11, "forced first order", 10.0, ac11},
      {12, "Poincare fixed point", 60.0, ac12},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_seconds <= 0.0 || secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::string timing = "runtime " + fmt("%.3g", secs * 1e3) + " ms";
    if (c.limit_seconds > 0.0) timing += " (limit " + fmt("%g", c.limit_seconds * 1e3) + " ms)";
    std::printf("AC%-2d %s  %s: %s; %s\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                timing.c_str());
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
