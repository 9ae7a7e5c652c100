#pragma once

// Polynomial evaluation and conjugacy defect shared by the unforced and
// forced manifold code. Templated on the scalar so residuals can be formed in
// extended precision.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "ssmbeam/detail/trig_series.hpp"
#include "ssmbeam/errors.hpp"
#include "ssmbeam/ssm_unforced.hpp"

namespace ssmbeam::detail {

template <class Real>
using Cx = std::complex<Real>;

template <class Real>
struct Pair2 {
  Cx<Real> plus;
  Cx<Real> minus;
};

template <class Real>
using PolyTable = std::map<IndexPair, std::map<int, Pair2<Real>>>;

template <class Real>
Cx<Real> promote(cplx c) {
  return {static_cast<Real>(c.real()), static_cast<Real>(c.imag())};
}

template <class Real>
PolyTable<Real> promote_table(const CoefficientTable& table) {
  PolyTable<Real> out;
  for (const auto& [index, modes] : table.entries) {
    for (const auto& [mode, c] : modes) {
      out[index][mode] = {promote<Real>(c.plus), promote<Real>(c.minus)};
    }
  }
  return out;
}

// lambda_n^+ for n = 1..n_modes, taken from the table where present so the
// linear part cancels exactly against the stored coefficients.
template <class Real>
std::vector<Cx<Real>> mode_lambdas(const BeamParameters& p, const std::map<int, cplx>& known,
                                   int n_modes) {
  std::vector<Cx<Real>> out;
  out.reserve(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    const auto it = known.find(n);
    const cplx lam = it != known.end() ? it->second : eigenvalues(p, n).lambda_plus;
    if (lam.imag() == 0.0) {
      throw ResonanceError("defective/overdamped mode: basis change singular (mode " +
                           std::to_string(n) + ")");
    }
    out.push_back(promote<Real>(lam));
  }
  return out;
}

template <class Real>
struct Jet {
  std::vector<Pair2<Real>> value;
  std::vector<Pair2<Real>> d_z;
  std::vector<Pair2<Real>> d_zbar;
};

template <class Real>
Cx<Real> ipow(Cx<Real> x, int k) {
  Cx<Real> r(1);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

template <class Real>
Jet<Real> polynomial_jet(const PolyTable<Real>& table, Cx<Real> z, int n_modes) {
  Jet<Real> jet;
  jet.value.assign(n_modes, {});
  jet.d_z.assign(n_modes, {});
  jet.d_zbar.assign(n_modes, {});
  const Cx<Real> zb = std::conj(z);
  for (const auto& [index, modes] : table) {
    const Cx<Real> mono = ipow(z, index.n1) * ipow(zb, index.n2);
    const Cx<Real> dz =
        index.n1 > 0 ? Real(index.n1) * ipow(z, index.n1 - 1) * ipow(zb, index.n2) : Cx<Real>(0);
    const Cx<Real> dzb =
        index.n2 > 0 ? Real(index.n2) * ipow(z, index.n1) * ipow(zb, index.n2 - 1) : Cx<Real>(0);
    for (const auto& [mode, c] : modes) {
      if (mode < 1 || mode > n_modes) continue;
      auto& v = jet.value[mode - 1];
      auto& a = jet.d_z[mode - 1];
      auto& b = jet.d_zbar[mode - 1];
      v.plus += c.plus * mono;
      v.minus += c.minus * mono;
      a.plus += c.plus * dz;
      a.minus += c.minus * dz;
      b.plus += c.plus * dzb;
      b.minus += c.minus * dzb;
    }
  }
  return jet;
}

// Cubic foundation force of the state with eigen coordinates `value`,
// expressed in eigen coordinates: V^{-1} (0, w_m * proj_m(-kappa u^3)).
template <class Real>
std::vector<Pair2<Real>> cubic_force_eigen(const BeamParameters& p, MassScaling scaling,
                                           const std::vector<Cx<Real>>& lambdas,
                                           const std::vector<Pair2<Real>>& value) {
  const std::size_t n = value.size();
  std::vector<Real> u(n);
  for (std::size_t k = 0; k < n; ++k) u[k] = (value[k].plus + value[k].minus).real();
  const std::vector<Real> cube = cube_on_sines<Real>(u, n);
  std::vector<Pair2<Real>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Real f = -static_cast<Real>(p.kappa) *
                   static_cast<Real>(mass_factor(p, static_cast<int>(k) + 1, scaling)) * cube[k];
    const Cx<Real> d = std::conj(lambdas[k]) - lambdas[k];
    out[k] = {-f / d, f / d};
  }
  return out;
}

// A K + G(K) - DK (zdot, conj zdot) per sine mode in eigen coordinates.
template <class Real>
std::vector<Pair2<Real>> conjugacy_defect(const BeamParameters& p, MassScaling scaling,
                                          const std::vector<Cx<Real>>& lambdas,
                                          const Jet<Real>& jet, Cx<Real> zdot) {
  std::vector<Pair2<Real>> out = cubic_force_eigen(p, scaling, lambdas, jet.value);
  const Cx<Real> zdot_bar = std::conj(zdot);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Cx<Real> lam = lambdas[k];
    out[k].plus += lam * jet.value[k].plus - jet.d_z[k].plus * zdot - jet.d_zbar[k].plus * zdot_bar;
    out[k].minus += std::conj(lam) * jet.value[k].minus - jet.d_z[k].minus * zdot -
                    jet.d_zbar[k].minus * zdot_bar;
  }
  return out;
}

// Euclidean norm of V * e over all modes.
template <class Real>
Real modal_norm(const std::vector<Cx<Real>>& lambdas, const std::vector<Pair2<Real>>& e) {
  Real acc = 0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const Cx<Real> u = e[k].plus + e[k].minus;
    const Cx<Real> v = lambdas[k] * e[k].plus + std::conj(lambdas[k]) * e[k].minus;
    acc += std::norm(u) + std::norm(v);
  }
  return std::sqrt(acc);
}

}  // namespace ssmbeam::detail
