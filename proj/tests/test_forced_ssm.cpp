#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ssmbeam/errors.hpp"
#include "ssmbeam/forced_ssm.hpp"
#include "ssmbeam/forcing.hpp"
#include "ssmbeam/galerkin.hpp"

using namespace ssmbeam;

namespace {

constexpr double kPi = std::numbers::pi;

BeamParameters forced_params(double eps = 1e-3) {
  BeamParameters p = oracle::reference_beam();
  p.epsilon = eps;
  p.omega = 1.3;
  return p;
}

ForcedSsm make_forced(const BeamParameters& p, MassScaling scaling = MassScaling::rayleigh) {
  return first_order_coefficients(p, ForcingProfile::single_mode(p.omega), build_ssm(p, {scaling}));
}

double worst_epsilon_residual(const BeamParameters& p, const ForcedSsm& s, double r, double eps) {
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double theta = 2.0 * kPi * i / 6.0 + 0.1;
      const cplx z = std::polar(r, 2.0 * kPi * j / 6.0 + 0.2);
      worst = std::max(worst, epsilon_residual(p, s, z, theta, eps, 16));
    }
  }
  return worst;
}

double slope(double x0, double y0, double x1, double y1) {
  return std::log(y1 / y0) / std::log(x1 / x0);
}

}  // namespace

TEST(LinearResponse, StaticDeflection) {
  const BeamParameters p = oracle::reference_beam();
  const HarmonicTable h{{{2, 0}, cplx(0.7)}};
  const PeriodicOrbit o = linear_periodic_response(p, h, 1.0, 0.01);
  EXPECT_NEAR(o.coefficients.at({2, 0}).real(), 0.01 * 0.7 / (16.0 + 1.0), 1e-17);
}

TEST(LinearResponse, UndampedResonanceRejected) {
  BeamParameters p = oracle::reference_beam();
  p.beta = p.delta = 0.0;
  const double omega = std::sqrt(2.0 / 2.0);
  EXPECT_THROW(linear_periodic_response(p, ForcingProfile::single_mode(omega), 0.1), ResonanceError);
}

TEST(LinearResponse, SectionValueAndRealness) {
  const BeamParameters p = forced_params();
  const PeriodicOrbit o = linear_periodic_response(p, ForcingProfile::single_mode(1.3), 1e-3);
  const cplx expect = 1e-3 * 0.5 / (cplx(0.0, 1.3 * 1.1) + 2.0 - 1.69 * 2.0);
  EXPECT_LT(std::abs(o.coefficients.at({1, 1}) - expect), 1e-18);
  EXPECT_EQ(o.coefficients.at({1, -1}), std::conj(o.coefficients.at({1, 1})));
  std::vector<double> times;
  for (int k = 0; k < 50; ++k) times.push_back(0.137 * k);
  EXPECT_LT(o.max_imaginary_residue(times, 3), 1e-12);
}

TEST(LinearResponse, MatchesSteadyStateOfLinearGalerkin) {
  BeamParameters p = forced_params(1e-2);
  p.kappa = 0.0;
  const ForcingProfile f = ForcingProfile::single_mode(1.3);
  GalerkinConfig cfg;
  cfg.n_modes = 3;
  cfg.dt = 2e-3;
  const double period = 2.0 * kPi / 1.3;
  const double t0 = 40.0 * period;  // transients decay like exp(-0.275 t)
  const int samples = 256;
  std::vector<double> times;
  for (int k = 0; k <= samples; ++k) times.push_back(t0 + period * k / samples);
  const Trajectory traj = integrate(p, f, cfg, GalerkinState::zero(3), times);
  cplx acc = 0.0;
  for (int k = 0; k < samples; ++k) {
    acc += traj[k].a[0] * std::exp(cplx(0.0, -1.3 * traj[k].t));
  }
  acc /= double(samples);
  const cplx expect = linear_periodic_response(p, f, p.epsilon).coefficients.at({1, 1});
  EXPECT_LT(std::abs(acc - expect), 1e-9 * std::abs(expect) + 1e-13);
}

TEST(FirstOrder, StructureAndForcingCoefficient) {
  const BeamParameters p = forced_params();
  const ForcedSsm s = make_forced(p);
  const cplx l1 = s.model.base.lambda1;
  EXPECT_LT(std::abs(s.model.forcing_coeff - 0.5 / (std::conj(l1) - l1)), 1e-16);
  EXPECT_EQ(s.first_order.entries.size(), 3u);
  for (const auto& [index, h] : s.first_order.entries) EXPECT_EQ(index.order(), 2);
  EXPECT_EQ(s.first_order.coefficient({1, 0}, 1, 1).plus, cplx(0.0));
  for (double th : {0.0, 0.4, 2.0}) {
    const EigenCoords r = s.model.R1_0(th);
    EXPECT_EQ(r.minus, std::conj(r.plus));
    EXPECT_EQ(r.minus, -r.plus);
  }
}

TEST(FirstOrder, LinearSystemHasNoCorrection) {
  BeamParameters p = forced_params();
  p.kappa = 0.0;
  const ForcedSsm s = make_forced(p);
  for (const auto& [index, h] : s.first_order.entries) {
    for (const auto& [key, c] : h) {
      EXPECT_EQ(c.plus, cplx(0.0));
      EXPECT_EQ(c.minus, cplx(0.0));
    }
  }
}

TEST(FirstOrder, LeadingCoefficientDerivedValue) {
  const BeamParameters p = forced_params();
  for (MassScaling scaling : {MassScaling::rayleigh, MassScaling::unit}) {
    const ForcedSsm s = make_forced(p, scaling);
    const cplx l1 = s.model.base.lambda1;
    const cplx d1 = std::conj(l1) - l1;
    const double w = mass_factor(p, 1, scaling);
    const cplx expect = 9.0 * p.kappa * w * w / (16.0 * l1 * d1 * d1 * (l1 + cplx(0.0, 1.3)));
    const cplx got = s.first_order.coefficient({2, 0}, 1, 1).plus;
    EXPECT_LT(std::abs(got - expect), 1e-14 * std::abs(expect));
    // The commonly quoted expression lacks one factor 1 / (conj(lambda1) - lambda1).
    if (scaling == MassScaling::unit) {
      const cplx quoted = 9.0 * p.kappa / (8.0 * d1) / (2.0 * l1 * (l1 + cplx(0.0, 1.3)));
      EXPECT_LT(std::abs(got * d1 - quoted), 1e-14 * std::abs(quoted));
    }
  }
}

TEST(FirstOrder, RealnessOfForcedManifold) {
  const BeamParameters p = forced_params();
  const ForcedSsm s = make_forced(p);
  for (const auto& [index, h] : s.first_order.entries) {
    for (const auto& [key, c] : h) {
      const EigenCoords mirror = s.first_order.coefficient({index.n2, index.n1}, key.first, -key.second);
      EXPECT_LT(std::abs(mirror.plus - std::conj(c.minus)), 1e-16);
      EXPECT_LT(std::abs(mirror.minus - std::conj(c.plus)), 1e-16);
    }
  }
  const CoefficientTable t = s.first_order.at_theta(0.7, s.base_table.lambdas, s.base_table.scaling);
  for (const ModalPair& m : evaluate_parametrization(t, cplx(0.1, 0.3), 3)) {
    EXPECT_LT(std::abs(m.u.imag()), 1e-15);
    EXPECT_LT(std::abs(m.v.imag()), 1e-15);
  }
}

TEST(FirstOrder, EpsilonResidualIsSecondOrder) {
  const BeamParameters p = forced_params();
  const ForcedSsm s = make_forced(p);
  const double lo = worst_epsilon_residual(p, s, 0.01, 1e-4);
  const double hi = worst_epsilon_residual(p, s, 0.01, 1e-2);
  EXPECT_GE(slope(1e-4, lo, 1e-2, hi), 1.9);
  EXPECT_EQ(epsilon_residual(p, s, 0.01, 0.3, 0.0, 16), 0.0);
}

TEST(FirstOrder, WithoutCorrectionResidualIsFirstOrder) {
  const BeamParameters p = forced_params();
  ForcedSsm s = make_forced(p);
  s.first_order.entries.clear();
  const double lo = worst_epsilon_residual(p, s, 0.01, 1e-4);
  const double hi = worst_epsilon_residual(p, s, 0.01, 1e-2);
  EXPECT_LT(slope(1e-4, lo, 1e-2, hi), 1.2);
}

TEST(FirstOrder, Preconditions) {
  const BeamParameters p = forced_params();
  ForcingProfile f = ForcingProfile::single_mode(1.3, 2);
  EXPECT_THROW(first_order_coefficients(p, f, build_ssm(p)), ValidationError);
  EXPECT_THROW(first_order_coefficients(p, ForcingProfile::single_mode(1.3), build_ssm(p), 1e3),
               ResonanceError);
}

TEST(ForcedField, ReducesToUnforced) {
  const ForcedSsm s = make_forced(forced_params(0.0));
  const cplx z(0.1, -0.2);
  EXPECT_EQ(forced_reduced_vector_field(s.model, z, 0.3), reduced_vector_field(s.model.base, z));
}

TEST(ForcedField, PolarAgreesWithCartesian) {
  const ForcedSsm s = make_forced(forced_params(0.05));
  oracle::Rng rng(41);
  for (int k = 0; k < 200; ++k) {
    const double r = rng.uniform(1e-3, 0.5);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const double theta = rng.uniform(0.0, 2.0 * kPi);
    const cplx z = std::polar(r, phi);
    const cplx zd = forced_reduced_vector_field(s.model, z, theta);
    const PolarRates pr = forced_polar_rates(s.model, r, phi, theta);
    const cplx from_polar = (pr.r_dot + cplx(0.0, r * pr.phi_dot)) * std::polar(1.0, phi);
    EXPECT_LT(std::abs(from_polar - zd), 1e-12);
    // Closed polar form with the forcing weight eps w a / (2 B).
    const double B = s.model.base.B_imag();
    const double g = s.model.epsilon * mass_factor(oracle::reference_beam(), 1, MassScaling::rayleigh) /
                     (2.0 * B);
    EXPECT_NEAR(pr.r_dot, s.model.base.A_real() * r - g * std::cos(theta) * std::sin(phi), 1e-13);
    EXPECT_NEAR(pr.phi_dot,
                s.model.base.omega_inst(r) - g / r * std::cos(theta) * std::cos(phi), 1e-11);
  }
  EXPECT_THROW(forced_polar_rates(s.model, 1e-7, 0.0, 0.0), ValidationError);
}

TEST(ForcedField, PeriodAverageOfRadialRate) {
  const ForcedSsm s = make_forced(forced_params(1e-2));
  const double r = 0.2, phi = 0.9;
  const int n = 512;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += forced_polar_rates(s.model, r, phi, 2.0 * kPi * k / n).r_dot;
  EXPECT_NEAR(acc / n, s.model.base.A_real() * r, 1e-14);
}

TEST(Stroboscopic, UnforcedRadiusDecays) {
  const ForcedSsm s = make_forced(forced_params(0.0));
  const cplx z0(0.1, 0.05);
  const cplx z1 = stroboscopic_map(s.model, z0, 0.0);
  EXPECT_NEAR(std::abs(z1), std::exp(s.model.base.A_real() * s.model.period()) * std::abs(z0),
              1e-12);
  const auto samples = stroboscopic_samples(s.model, z0, 0.0, 4);
  EXPECT_EQ(samples.size(), 5u);
  EXPECT_EQ(samples[1], z1);
}

TEST(Stroboscopic, ConjugatePathConsistency) {
  // The conjugate of z(t) solves the conjugate equation: flowing conj(z0) with
  // the mirrored model returns conj(z(T)).
  const ForcedSsm s = make_forced(forced_params(0.02));
  ForcedReducedModel mirrored = s.model;
  mirrored.base.lambda1 = std::conj(s.model.base.lambda1);
  mirrored.base.R0 = std::conj(s.model.base.R0);
  mirrored.forcing_coeff = std::conj(s.model.forcing_coeff);
  const cplx z0(0.05, 0.02);
  EXPECT_LT(std::abs(stroboscopic_map(mirrored, std::conj(z0), 0.3) -
                     std::conj(stroboscopic_map(s.model, z0, 0.3))),
            1e-12);
}

TEST(Stroboscopic, FixedPointNewton) {
  const ForcedSsm s = make_forced(forced_params(1e-3));
  const StroboscopicFixedPoint fp = stroboscopic_fixed_point(s.model, 0.0);
  EXPECT_LE(fp.iterations, 5);
  EXPECT_LT(std::abs(stroboscopic_map(s.model, fp.z, 0.0) - fp.z), 1e-13);
  EXPECT_LT(std::abs(fp.z), 1e-2);
}

TEST(Stroboscopic, FixedPointApproachesLinearResponse) {
  auto mismatch = [](double eps) {
    const BeamParameters p = forced_params(eps);
    const ForcedSsm s = make_forced(p);
    const double theta0 = 0.4;
    const StroboscopicFixedPoint fp = stroboscopic_fixed_point(s.model, theta0);
    const PeriodicOrbit o = linear_periodic_response(p, ForcingProfile::single_mode(1.3), eps);
    const auto [a, b] = o.state_at(theta0 / 1.3, 1);
    const cplx zlin = modal_to_eigen(p, 1, ModalPair{a[0], b[0]}).plus;
    return std::abs(fp.z - zlin);
  };
  const double m1 = mismatch(4e-3);
  const double m2 = mismatch(2e-3);
  const double m3 = mismatch(1e-3);
  EXPECT_GE(std::log2(m1 / m2), 1.9);
  EXPECT_GE(std::log2(m2 / m3), 1.9);
}
