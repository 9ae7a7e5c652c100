#pragma once

// Exact products of finite sine series on (0, pi) by repeated
// product-to-sum folding. Templated on the scalar so residual checks can run
// in extended precision.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace ssmbeam::detail {

// sum_m coef[m] * sin(m x) (coef[0] unused) or sum_m coef[m] * cos(m x).
template <class Real>
struct TrigSeries {
  bool is_sine = true;
  std::vector<Real> coef;
};

// Multiplies `series` by the sine series with coefficients a[k-1] on sin(k x).
template <class Real>
TrigSeries<Real> times_sine(const TrigSeries<Real>& series, std::span<const Real> a) {
  const std::size_t n = a.size();
  TrigSeries<Real> out;
  out.is_sine = !series.is_sine;
  out.coef.assign(series.coef.size() + n, Real(0));
  const std::size_t first = series.is_sine ? 1 : 0;
  for (std::size_t m = first; m < series.coef.size(); ++m) {
    const Real c = series.coef[m];
    if (c == Real(0)) continue;
    for (std::size_t k = 1; k <= n; ++k) {
      const Real h = Real(0.5) * c * a[k - 1];
      const std::size_t sum = m + k;
      if (series.is_sine) {
        // sin m sin k = (cos(m - k) - cos(m + k)) / 2
        const std::size_t diff = m > k ? m - k : k - m;
        out.coef[diff] += h;
        out.coef[sum] -= h;
      } else {
        // cos m sin k = (sin(k + m) + sin(k - m)) / 2
        out.coef[sum] += h;
        if (k > m) {
          out.coef[k - m] += h;
        } else if (m > k) {
          out.coef[m - k] -= h;
        }
      }
    }
  }
  return out;
}

template <class Real>
TrigSeries<Real> sine_power(std::span<const Real> a, int power) {
  TrigSeries<Real> s;
  s.is_sine = true;
  s.coef.assign(a.size() + 1, Real(0));
  for (std::size_t k = 0; k < a.size(); ++k) s.coef[k + 1] = a[k];
  for (int p = 1; p < power; ++p) s = times_sine(s, a);
  return s;
}

// Coefficients b_n of the L2(0, pi) projection onto sin(n x), n = 1..keep.
template <class Real>
std::vector<Real> project_on_sines(const TrigSeries<Real>& s, std::size_t keep) {
  std::vector<Real> out(keep, Real(0));
  if (s.is_sine) {
    for (std::size_t n = 1; n <= keep && n < s.coef.size(); ++n) out[n - 1] = s.coef[n];
    return out;
  }
  // (2/pi) int_0^pi cos(m x) sin(n x) dx = (2/pi) n (1 - (-1)^(n+m)) / (n^2 - m^2), m != n.
  const Real two_over_pi = Real(2) / std::numbers::pi_v<Real>;
  for (std::size_t n = 1; n <= keep; ++n) {
    Real acc = 0;
    for (std::size_t m = 0; m < s.coef.size(); ++m) {
      if (m == n || ((n + m) % 2 == 0) || s.coef[m] == Real(0)) continue;
      const Real nn = static_cast<Real>(n);
      const Real mm = static_cast<Real>(m);
      acc += s.coef[m] * Real(2) * nn / (nn * nn - mm * mm);
    }
    out[n - 1] = two_over_pi * acc;
  }
  return out;
}

// int_0^pi of the series.
template <class Real>
Real integral(const TrigSeries<Real>& s) {
  if (!s.is_sine) return s.coef.empty() ? Real(0) : std::numbers::pi_v<Real> * s.coef[0];
  Real acc = 0;
  for (std::size_t m = 1; m < s.coef.size(); m += 2) acc += Real(2) * s.coef[m] / static_cast<Real>(m);
  return acc;
}

// Sine coefficients of (sum_k a_k sin k x)^3 on modes 1..keep.
template <class Real>
std::vector<Real> cube_on_sines(std::span<const Real> a, std::size_t keep) {
  return project_on_sines(sine_power(a, 3), keep);
}

}  // namespace ssmbeam::detail
