#pragma once

// Test-only oracles, independent of the library's estimation paths:
// Gauss-Legendre tensor quadrature for the gate integrals, a plain Kalman
// covariance recursion, and central finite differences.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bistatic/bounds.hpp"
#include "bistatic/types.hpp"

namespace oracle {

using bistatic::Mat3;
using bistatic::Mat34;
using bistatic::Mat4;
using bistatic::Vec3;
using bistatic::Vec4;

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
// Legendre recurrence.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(bistatic::kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  return {x, w};
}

// E over z1 ~ Uniform([-g, g]^3) of a 3-dim integrand by tensor quadrature.
inline double quad_expectation_3d(const std::function<double(const Vec3&)>& f,
                                  double g, int nodes) {
  auto [x, w] = gauss_legendre(nodes);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j)
      for (int k = 0; k < nodes; ++k) {
        const Vec3 z(g * x[i], g * x[j], g * x[k]);
        sum += (w[i] / 2.0) * (w[j] / 2.0) * (w[k] / 2.0) * f(z);
      }
  return sum;
}

// E over (z1, z2) ~ Uniform([-g, g]^6).
inline double quad_expectation_6d(
    const std::function<double(const Vec3&, const Vec3&)>& f, double g,
    int nodes) {
  auto [x, w] = gauss_legendre(nodes);
  std::vector<double> hw(nodes);
  for (int i = 0; i < nodes; ++i) hw[i] = w[i] / 2.0;
  double sum = 0.0;
  for (int a = 0; a < nodes; ++a)
    for (int b = 0; b < nodes; ++b)
      for (int c = 0; c < nodes; ++c) {
        const Vec3 z1(g * x[a], g * x[b], g * x[c]);
        const double w1 = hw[a] * hw[b] * hw[c];
        for (int d = 0; d < nodes; ++d)
          for (int e = 0; e < nodes; ++e)
            for (int f6 = 0; f6 < nodes; ++f6) {
              const Vec3 z2(g * x[d], g * x[e], g * x[f6]);
              sum += w1 * hw[d] * hw[e] * hw[f6] * f(z1, z2);
            }
      }
  return sum;
}

// Deterministic quadrature of the library's gate integrands. The integrals
// are 3m-dimensional; tensor grids are practical for m <= 2 only.
inline double irf_quadrature(const bistatic::bounds::GateContext& ctx, int m,
                             int nodes = 32) {
  const auto f = bistatic::bounds::make_gate_factors(ctx, m);
  if (m == 1) {
    return quad_expectation_3d(
        [&](const Vec3& z1) { return bistatic::bounds::irf_integrand(f, &z1); },
        ctx.g, nodes);
  }
  if (m == 2) {
    return quad_expectation_6d(
        [&](const Vec3& z1, const Vec3& z2) {
          const Vec3 z[2] = {z1, z2};
          return bistatic::bounds::irf_integrand(f, z);
        },
        ctx.g, nodes > 16 ? 16 : nodes);
  }
  throw std::logic_error("irf_quadrature: tensor grid limited to m <= 2");
}

inline double igf_quadrature(const bistatic::bounds::GateContext& ctx, int m,
                             bool detection_only, int nodes = 16) {
  const auto f = bistatic::bounds::make_gate_factors(ctx, m);
  if (m == 1) {
    return quad_expectation_3d(
        [&](const Vec3& z1) {
          return bistatic::bounds::igf_integrand(f, &z1, detection_only);
        },
        ctx.g, nodes == 16 ? 32 : nodes);
  }
  if (m == 2) {
    return quad_expectation_6d(
        [&](const Vec3& z1, const Vec3& z2) {
          const Vec3 z[2] = {z1, z2};
          return bistatic::bounds::igf_integrand(f, z, detection_only);
        },
        ctx.g, nodes);
  }
  throw std::logic_error("igf_quadrature: tensor grid limited to m <= 2");
}

// Linear Kalman filter posterior covariance recursion with fixed H and R.
inline Mat4 kalman_posterior_cov(const Mat4& p0, const Mat4& f, const Mat4& q,
                                 const Mat34& h, const Mat3& r, int steps) {
  Mat4 p = p0;
  for (int k = 0; k < steps; ++k) {
    p = f * p * f.transpose() + q;
    const Mat3 s = h * p * h.transpose() + r;
    const Eigen::Matrix<double, 4, 3> gain = p * h.transpose() * s.inverse();
    p = (Mat4::Identity() - gain * h) * p;
    p = 0.5 * (p + p.transpose());
  }
  return p;
}

// Central finite difference of a scalar function.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
