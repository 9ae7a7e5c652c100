#include "ssmbeam/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "ssmbeam/errors.hpp"

namespace ssmbeam {

namespace {

double damping_half_rate(const BeamParameters& p, int n) {
  const double n2 = static_cast<double>(n) * n;
  return (p.beta * n2 + p.delta) / (2.0 + 2.0 * p.mu * n2);
}

double stiffness_ratio(const BeamParameters& p, int n) {
  const double n2 = static_cast<double>(n) * n;
  return (p.alpha * n2 * n2 + p.gamma) / (1.0 + p.mu * n2);
}

void require_mode(int n) {
  if (n < 1) throw ValidationError("sine mode index must be >= 1, got " + std::to_string(n));
}

// Smallest J >= start beyond which every mode is underdamped with
// Im lambda_j > im_bound: alpha J^4 / (1 + mu J^2) is increasing and bounds
// k_j from below, while s_j never exceeds max(s_start, beta / (2 mu)).
int tail_start(const BeamParameters& p, int start, double im_bound) {
  const double s_max = std::max(damping_half_rate(p, start), p.beta / (2.0 * p.mu));
  const double needed = s_max * s_max + im_bound * im_bound;
  int j = start;
  while (true) {
    const double j2 = static_cast<double>(j) * j;
    if (p.alpha * j2 * j2 / (1.0 + p.mu * j2) > needed) return j;
    if (j > 100000000) throw NumericalError("spectral tail scan did not terminate");
    ++j;
  }
}

}  // namespace

void BeamParameters::validate() const {
  const double all[] = {alpha, beta, gamma, delta, mu, kappa, epsilon, omega};
  for (double v : all) {
    if (!std::isfinite(v)) throw ValidationError("beam parameters must be finite");
  }
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (!(mu > 0.0)) throw ValidationError("mu must be positive (Rayleigh beam)");
  if (!(omega > 0.0)) throw ValidationError("omega must be positive");
  if (beta < 0.0 || gamma < 0.0 || delta < 0.0 || kappa < 0.0 || epsilon < 0.0) {
    throw ValidationError("beta, gamma, delta, kappa and epsilon must be non-negative");
  }
}

double quotient_four_beta(double delta, double mu) {
  if (!(mu > 0.0 && mu < 1.0 / 3.0)) {
    throw ValidationError("beta = 4 delta mu / (1 - 3 mu) needs 0 < mu < 1/3");
  }
  return 4.0 * delta * mu / (1.0 - 3.0 * mu);
}

double mass_factor(const BeamParameters& p, int n, MassScaling scaling) {
  if (scaling == MassScaling::unit) return 1.0;
  return 1.0 / (1.0 + p.mu * static_cast<double>(n) * n);
}

std::string to_string(MassScaling scaling) {
  return scaling == MassScaling::unit ? "unit" : "rayleigh";
}

MassScaling parse_mass_scaling(const std::string& text) {
  if (text == "rayleigh") return MassScaling::rayleigh;
  if (text == "unit") return MassScaling::unit;
  throw ValidationError("mass_scaling must be 'rayleigh' or 'unit', got '" + text + "'");
}

EigenPair eigenvalues(const BeamParameters& p, int n) {
  require_mode(n);
  const double s = damping_half_rate(p, n);
  const double radicand = s * s - stiffness_ratio(p, n);
  EigenPair pair;
  pair.n = n;
  if (radicand < 0.0) {
    const double w = std::sqrt(-radicand);
    pair.lambda_plus = {-s, w};
    pair.lambda_minus = {-s, -w};
  } else {
    const double w = std::sqrt(radicand);
    pair.lambda_plus = {-s + w, 0.0};
    pair.lambda_minus = {-s - w, 0.0};
  }
  return pair;
}

double real_part_limit(const BeamParameters& p) {
  if (!(p.mu > 0.0)) {
    throw ValidationError("limit undefined (Euler-Bernoulli regime excluded)");
  }
  return -p.beta / (2.0 * p.mu);
}

double outer_real_part_infimum(const BeamParameters& p, int n_slow) {
  require_mode(n_slow);
  const int first = n_slow + 1;
  const int last = tail_start(p, first, 0.0);
  double inf = real_part_limit(p);
  for (int j = first; j <= last; ++j) {
    inf = std::min(inf, eigenvalues(p, j).lambda_minus.real());
  }
  return inf;
}

int spectral_quotient(const BeamParameters& p, int n_slow, double snap_tol) {
  const double slow = eigenvalues(p, 1).lambda_plus.real();
  if (slow == 0.0) throw ValidationError("undamped slow mode");
  const double ratio = outer_real_part_infimum(p, n_slow) / slow;
  if (!(ratio > 0.0)) throw ValidationError("spectral quotient is not positive");
  const int q = static_cast<int>(std::floor(ratio * (1.0 + snap_tol)));
  if (q < 1) {
    throw ValidationError("modes 1..N are not the slowest (spectral quotient < 1)");
  }
  return q;
}

bool check_inner_nonresonance(const BeamParameters& p, int n_slow, int q, double tol) {
  if (!(tol > 0.0)) throw ValidationError("non-resonance tolerance must be positive");
  require_mode(n_slow);
  if (q < 2) return true;

  std::vector<cplx> generators;
  for (int i = 1; i <= n_slow; ++i) {
    const EigenPair e = eigenvalues(p, i);
    generators.push_back(e.lambda_plus);
    generators.push_back(e.lambda_minus);
  }

  // All sums of 2..q generators (with repetition).
  std::vector<cplx> sums;
  std::function<void(std::size_t, int, cplx)> grow = [&](std::size_t from, int count, cplx acc) {
    if (count >= 2) sums.push_back(acc);
    if (count == q) return;
    for (std::size_t g = from; g < generators.size(); ++g) grow(g, count + 1, acc + generators[g]);
  };
  grow(0, 0, cplx{0.0, 0.0});

  double im_bound = 0.0;
  for (const cplx& s : sums) im_bound = std::max(im_bound, std::abs(s.imag()));
  const int last = tail_start(p, n_slow + 1, im_bound + tol);

  for (int j = n_slow + 1; j < last; ++j) {
    const EigenPair e = eigenvalues(p, j);
    for (const cplx& s : sums) {
      if (std::abs(s - e.lambda_plus) <= tol || std::abs(s - e.lambda_minus) <= tol) return false;
    }
  }
  return true;
}

bool forcing_frequency_nonresonant(const BeamParameters& p, int n_max, double tol) {
  if (!(p.omega > 0.0)) throw ValidationError("omega must be positive");
  for (int n = 1; n <= n_max; ++n) {
    const double im = eigenvalues(p, n).lambda_plus.imag();
    if (im == 0.0) continue;
    const double x = im / p.omega;
    if (std::abs(x - std::round(x)) <= tol) return false;
  }
  return true;
}

bool forcing_floquet_nonresonant(const BeamParameters& p, int n_max, int m_max, double tol) {
  if (!(p.omega > 0.0)) throw ValidationError("omega must be positive");
  for (int n = 1; n <= n_max; ++n) {
    const EigenPair e = eigenvalues(p, n);
    for (int l = -m_max; l <= m_max; ++l) {
      const cplx target{0.0, l * p.omega};
      if (std::abs(target - e.lambda_plus) <= tol || std::abs(target - e.lambda_minus) <= tol) {
        return false;
      }
    }
  }
  return true;
}

bool check_forcing_nonresonance(const BeamParameters& p, int n_max, int m_max, double tol) {
  return forcing_frequency_nonresonant(p, n_max, tol) &&
         forcing_floquet_nonresonant(p, n_max, m_max, tol);
}

bool check_ratio_condition(const BeamParameters& p, int n_slow, int order, double snap_tol) {
  require_mode(n_slow);
  double sup = -std::numeric_limits<double>::infinity();
  for (int j = 1; j <= n_slow; ++j) sup = std::max(sup, eigenvalues(p, j).lambda_plus.real());
  if (sup == 0.0) return false;
  const double bound = outer_real_part_infimum(p, n_slow) / sup - 1.0;
  return static_cast<double>(order) >= bound - snap_tol * std::max(1.0, std::abs(bound));
}

bool AssumptionReport::all_hold() const {
  return parameter_inequalities() && underdamped_up_to == n_checked && monotone_real_parts &&
         inner_nonresonant && forcing_nonresonant && spectral_quotient.has_value();
}

std::vector<std::pair<std::string, std::string>> AssumptionReport::fields() const {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  return {
      {"ineq1", b(ineq1)},
      {"ineq2", b(ineq2)},
      {"ineq3", b(ineq3)},
      {"ineq4", b(ineq4)},
      {"n_checked", std::to_string(n_checked)},
      {"underdamped_up_to", std::to_string(underdamped_up_to)},
      {"monotone_real_parts", b(monotone_real_parts)},
      {"inner_nonresonant", b(inner_nonresonant)},
      {"forcing_nonresonant", b(forcing_nonresonant)},
      {"spectral_quotient",
       spectral_quotient ? std::to_string(*spectral_quotient) : std::string("undefined")},
      {"all_hold", b(all_hold())},
  };
}

AssumptionReport check_assumptions(const BeamParameters& p, int n_max) {
  require_mode(n_max);
  AssumptionReport r;
  r.ineq1 = p.beta * p.beta < 4.0 * p.alpha;
  r.ineq2 = 2.0 * p.beta * p.delta < 4.0 * p.gamma * p.mu;
  r.ineq3 = p.delta * p.delta < 4.0 * p.gamma;
  r.ineq4 = p.delta * p.mu < p.beta;
  r.n_checked = n_max;

  bool all_under = true;
  r.monotone_real_parts = true;
  double previous = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const EigenPair e = eigenvalues(p, n);
    if (all_under && e.underdamped()) {
      r.underdamped_up_to = n;
    } else {
      all_under = false;
    }
    const double re = e.lambda_plus.real();
    if (n > 1 && !(re < previous)) r.monotone_real_parts = false;
    previous = re;
  }
  if (n_max == 1) {
    // A single mode cannot show a trend; fall back on the closed-form criterion.
    r.monotone_real_parts = r.ineq4;
  }

  try {
    r.spectral_quotient = spectral_quotient(p, 1);
    r.inner_nonresonant = check_inner_nonresonance(p, 1, *r.spectral_quotient);
  } catch (const std::exception&) {
    r.spectral_quotient.reset();
    r.inner_nonresonant = false;
  }
  r.forcing_nonresonant = p.omega > 0.0 && check_forcing_nonresonance(p, n_max, n_max);
  return r;
}

EigenCoords modal_to_eigen(const BeamParameters& p, int n, const ModalPair& modal) {
  const EigenPair e = eigenvalues(p, n);
  if (!e.underdamped()) {
    throw ResonanceError("defective/overdamped mode: basis change singular (mode " +
                         std::to_string(n) + ")");
  }
  const cplx lam = e.lambda_plus;
  const cplx lam_bar = std::conj(lam);
  const cplx scale = 1.0 / (lam_bar - lam);
  return {scale * (lam_bar * modal.u - modal.v), scale * (-lam * modal.u + modal.v)};
}

ModalPair eigen_to_modal(const BeamParameters& p, int n, const EigenCoords& eigen) {
  const EigenPair e = eigenvalues(p, n);
  if (!e.underdamped()) {
    throw ResonanceError("defective/overdamped mode: basis change singular (mode " +
                         std::to_string(n) + ")");
  }
  const cplx lam = e.lambda_plus;
  return {eigen.plus + eigen.minus, lam * eigen.plus + std::conj(lam) * eigen.minus};
}

std::vector<EigenCoords> modal_to_eigen(const BeamParameters& p,
                                        std::span<const ModalPair> modal) {
  std::vector<EigenCoords> out;
  out.reserve(modal.size());
  for (std::size_t k = 0; k < modal.size(); ++k) {
    out.push_back(modal_to_eigen(p, static_cast<int>(k) + 1, modal[k]));
  }
  return out;
}

std::vector<ModalPair> eigen_to_modal(const BeamParameters& p,
                                      std::span<const EigenCoords> eigen) {
  std::vector<ModalPair> out;
  out.reserve(eigen.size());
  for (std::size_t k = 0; k < eigen.size(); ++k) {
    out.push_back(eigen_to_modal(p, static_cast<int>(k) + 1, eigen[k]));
  }
  return out;
}

}  // namespace ssmbeam
