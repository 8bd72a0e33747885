// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used as test oracles. Nothing here
// may call the library code path it is checking.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ris/mat.hpp"
#include "ris/quantum.hpp"
#include "ris/rissim.hpp"
#include "ris/scenarios.hpp"

namespace oracles {

using ris::cx;
using ris::Mat;

// Tensor product by the index definition, entry by entry.
inline Mat kron_naive(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Partial trace by the matrix-element sum sum_k <i,k|M|j,k>.
inline Mat ptrace_env_naive(const Mat& m, int ds, int de) {
  Mat out(ds, ds);
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < ds; ++j)
      for (int k = 0; k < de; ++k) out(i, j) += m(i * de + k, j * de + k);
  return out;
}

// Characteristic polynomial coefficients by Faddeev-LeVerrier:
// p(x) = x^n + c[1] x^{n-1} + ... + c[n].
inline std::vector<cx> char_poly(const Mat& m) {
  const int n = m.rows();
  std::vector<cx> c(std::size_t(n) + 1);
  c[0] = 1.0;
  Mat am = m;
  for (int k = 1; k <= n; ++k) {
    c[std::size_t(k)] = -am.trace() / double(k);
    if (k < n) {
      Mat shifted = am;
      for (int i = 0; i < n; ++i) shifted(i, i) += c[std::size_t(k)];
      am = m * shifted;
    }
  }
  return c;
}

// Durand-Kerner simultaneous root iteration on a monic polynomial.
inline std::vector<cx> poly_roots(const std::vector<cx>& coeffs) {
  const int n = int(coeffs.size()) - 1;
  std::vector<cx> r(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) r[std::size_t(i)] = std::pow(cx{0.4, 0.9}, i);
  auto eval = [&](cx x) {
    cx acc = coeffs[0];
    for (int k = 1; k <= n; ++k) acc = acc * x + coeffs[std::size_t(k)];
    return acc;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      cx den{1.0, 0.0};
      for (int j = 0; j < n; ++j)
        if (j != i) den *= r[std::size_t(i)] - r[std::size_t(j)];
      const cx delta = eval(r[std::size_t(i)]) / den;
      r[std::size_t(i)] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-14) break;
  }
  return r;
}

// Greedy multiset matching distance between two complex lists.
inline double multiset_distance(std::vector<cx> a, std::vector<cx> b) {
  double worst = 0.0;
  for (const cx& x : a) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < b.size(); ++j)
      if (std::abs(x - b[j]) < std::abs(x - b[best])) best = j;
    worst = std::max(worst, std::abs(x - b[best]));
    b.erase(b.begin() + long(best));
  }
  return worst;
}

inline double binary_entropy(double p) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

inline double binary_kl(double p, double q) {
  return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

// Shared two-level fixtures.
inline ris::RISSchedule rw_schedule(double e_sys, double e_env, double lambda, double tau,
                                    int t_steps, int m, double beta_a = 1.0, double beta_b = 1.0) {
  const Mat a = ris::scenarios::lowering_op();
  const Mat ad = a.adjoint();
  const Mat num = ris::scenarios::number_op();
  return ris::RISSchedule{2,
                          2,
                          ris::Hamiltonian(num * cx{e_sys, 0.0}),
                          [num, e_env](double) { return num * cx{e_env, 0.0}; },
                          ris::affine_schedule(beta_a, beta_b),
                          [a, ad](double) { return (ris::kron(ad, a) + ris::kron(a, ad)) * cx{0.5, 0.0}; },
                          lambda,
                          tau,
                          t_steps,
                          m};
}

inline ris::RISSchedule fd_schedule(double e_sys, double e_env, double lambda, double tau,
                                    int t_steps, int m, double beta_a = 1.0, double beta_b = 1.0) {
  const Mat a = ris::scenarios::lowering_op();
  const Mat ad = a.adjoint();
  const Mat num = ris::scenarios::number_op();
  return ris::RISSchedule{2,
                          2,
                          ris::Hamiltonian(num * cx{e_sys, 0.0}),
                          [num, e_env](double) { return num * cx{e_env, 0.0}; },
                          ris::affine_schedule(beta_a, beta_b),
                          [a, ad](double) { return ris::kron(a + ad, a + ad) * cx{0.5, 0.0}; },
                          lambda,
                          tau,
                          t_steps,
                          m};
}

}  // namespace oracles
