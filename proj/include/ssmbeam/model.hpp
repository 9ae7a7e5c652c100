#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ssmbeam {

using cplx = std::complex<double>;

/// Constants of the damped-forced Rayleigh beam
///   u_tt - mu u_ttxx = -alpha u_xxxx + beta u_txx - gamma u - delta u_t
///                      - kappa u^3 + epsilon h(x,t)
/// on (0, pi) with hinged ends.
struct BeamParameters {
  double alpha = 1.0;    // EI / rho
  double beta = 0.0;     // internal (bending-rate) damping
  double gamma = 0.0;    // linear foundation stiffness
  double delta = 0.0;    // external viscous damping
  double mu = 1.0;       // rotary inertia I_rho / rho
  double kappa = 0.0;    // cubic foundation coefficient
  double epsilon = 0.0;  // forcing amplitude
  double omega = 1.0;    // forcing angular frequency

  /// Throws ValidationError unless all fields are finite, alpha > 0, mu > 0,
  /// omega > 0 and the remaining coefficients are non-negative.
  void validate() const;
};

/// Internal damping that makes the slowest real part and the tail limit
/// stand in ratio four: beta = 4 delta mu / (1 - 3 mu). Requires mu < 1/3.
double quotient_four_beta(double delta, double mu);

/// Factor applied to the nonlinearity and forcing when projected onto the
/// eigenbasis of the first-order operator.
///
/// `rayleigh` divides mode n by the mass symbol 1 + mu n^2, which is what the
/// beam equation implies and what the Galerkin model integrates. `unit` keeps
/// the factor at one; with it the closed-form coefficients coincide with the
/// commonly quoted ones (R0 = 9 kappa i / (8 Im lambda_1)).
enum class MassScaling { rayleigh, unit };

double mass_factor(const BeamParameters& p, int n, MassScaling scaling);
std::string to_string(MassScaling scaling);
MassScaling parse_mass_scaling(const std::string& text);

struct EigenPair {
  cplx lambda_plus;
  cplx lambda_minus;
  int n = 1;

  /// True when the pair is complex conjugate with nonzero imaginary part.
  bool underdamped() const { return lambda_plus.imag() != 0.0; }
};

/// lambda_n^{+-} = -s +- sqrt(s^2 - k), s = (beta n^2 + delta)/(2 + 2 mu n^2),
/// k = (alpha n^4 + gamma)/(1 + mu n^2). For a negative radicand the square
/// root is i sqrt(|radicand|) so lambda_plus carries the positive imaginary part.
EigenPair eigenvalues(const BeamParameters& p, int n);

/// n -> infinity limit of Re lambda_n, i.e. -beta / (2 mu).
double real_part_limit(const BeamParameters& p);

struct AssumptionReport {
  bool ineq1 = false;  // beta^2 < 4 alpha
  bool ineq2 = false;  // 2 beta delta < 4 gamma mu
  bool ineq3 = false;  // delta^2 < 4 gamma
  bool ineq4 = false;  // delta mu < beta
  int n_checked = 0;
  int underdamped_up_to = 0;  // modes 1..underdamped_up_to all have Im != 0
  bool monotone_real_parts = false;
  bool inner_nonresonant = false;
  bool forcing_nonresonant = false;
  std::optional<int> spectral_quotient;

  bool parameter_inequalities() const { return ineq1 && ineq2 && ineq3 && ineq4; }
  bool all_hold() const;
  /// Flat key/value record, one `key=value` pair per entry, fixed order.
  std::vector<std::pair<std::string, std::string>> fields() const;
};

AssumptionReport check_assumptions(const BeamParameters& p, int n_max);

/// Integer part of inf_{j>N} Re lambda_j / Re lambda_1 for the slow subspace
/// spanned by modes 1..N. Ratios within `snap_tol` (relative) below an integer
/// are snapped up to it.
int spectral_quotient(const BeamParameters& p, int n_slow, double snap_tol = 1e-9);

/// inf_{j>N} Re lambda_j^{+-}, taken over a finite scan and the analytic limit.
double outer_real_part_infimum(const BeamParameters& p, int n_slow);

/// True iff |sum_i s_i lambda_i + t_i conj(lambda_i) - lambda_j^{+-}| > tol for
/// every multi-index with 2 <= |s| + |t| <= q and every j > N.
bool check_inner_nonresonance(const BeamParameters& p, int n_slow, int q,
                              double tol = 1e-9);

/// Im(lambda_n) / omega keeps a distance > tol from every integer, n <= n_max
/// (modes with Im lambda_n = 0 are skipped).
bool forcing_frequency_nonresonant(const BeamParameters& p, int n_max, double tol = 1e-9);

/// |i l omega - lambda_n^{+-}| > tol for |l| <= m_max and n <= n_max, i.e. the
/// period map exp(2 pi A / omega) has no eigenvalue 1.
bool forcing_floquet_nonresonant(const BeamParameters& p, int n_max, int m_max,
                                 double tol = 1e-9);

bool check_forcing_nonresonance(const BeamParameters& p, int n_max, int m_max,
                                double tol = 1e-9);

/// L >= inf_{j>N} Re lambda_j / sup_{j<=N} Re lambda_j - 1.
bool check_ratio_condition(const BeamParameters& p, int n_slow, int order,
                           double snap_tol = 1e-9);

/// Sine coefficients (u_n, v_n) of displacement and velocity for one mode.
struct ModalPair {
  cplx u;
  cplx v;
};

/// Coordinates along the eigenvectors (1, lambda_n^+) and (1, lambda_n^-).
struct EigenCoords {
  cplx plus;
  cplx minus;
};

/// Inverse basis change V_n^{-1} (eigen <- modal). Throws ResonanceError for a
/// mode without imaginary part.
EigenCoords modal_to_eigen(const BeamParameters& p, int n, const ModalPair& modal);
/// Basis change V_n = [[1, 1], [lambda, conj(lambda)]] (modal <- eigen).
ModalPair eigen_to_modal(const BeamParameters& p, int n, const EigenCoords& eigen);

/// Whole-vector versions; element k refers to sine mode k + 1.
std::vector<EigenCoords> modal_to_eigen(const BeamParameters& p,
                                        std::span<const ModalPair> modal);
std::vector<ModalPair> eigen_to_modal(const BeamParameters& p,
                                      std::span<const EigenCoords> eigen);

}  // namespace ssmbeam
