#pragma once

// Numerical-integration oracle for the spike-and-slab indicator posterior,
// shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace testsupport {

// Gauss-Legendre nodes/weights on [0, 1] by Newton iteration.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p0 = 1.0, p1 = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        const double dp = n * (t * p0 - p1) / (t * t - 1.0);
        const double step = p0 / dp;
        t -= step;
        if (std::abs(step) < 1e-15) break;
      }
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      const double dp = n * (t * p0 - p1) / (t * t - 1.0);
      x[i] = 0.5 * (1.0 + t);
      w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

// marginal likelihood p(n | included set) by quadrature over the simplex of
// the conditional Dirichlet; supports 1..3 included types
inline double quad_marginal(std::span<const double> ns, std::span<const double> betas) {
  static const GaussLegendre gl(24);
  const size_t m = ns.size();
  double beta_sum = 0.0, lg = 0.0;
  for (size_t j = 0; j < m; ++j) {
    beta_sum += betas[j];
    lg += std::lgamma(betas[j]);
  }
  const double log_b_prior = lg - std::lgamma(beta_sum);

  if (m == 1) return 1.0;
  if (m == 2) {
    double acc = 0.0;
    for (size_t i = 0; i < gl.x.size(); ++i) {
      const double t = gl.x[i];
      acc += gl.w[i] * std::pow(t, ns[0] + betas[0] - 1.0) *
             std::pow(1.0 - t, ns[1] + betas[1] - 1.0);
    }
    return acc / std::exp(log_b_prior);
  }
  double acc = 0.0;
  for (size_t i = 0; i < gl.x.size(); ++i) {
    const double a = gl.x[i];
    double inner = 0.0;
    const double width = 1.0 - a;
    for (size_t j = 0; j < gl.x.size(); ++j) {
      const double b = gl.x[j] * width;
      const double last = 1.0 - a - b;
      if (last <= 0.0) continue;
      inner += gl.w[j] * width * std::pow(b, ns[1] + betas[1] - 1.0) *
               std::pow(last, ns[2] + betas[2] - 1.0);
    }
    acc += gl.w[i] * std::pow(a, ns[0] + betas[0] - 1.0) * inner;
  }
  return acc / std::exp(log_b_prior);
}

// oracle two-point probability: quadrature marginals with and without type v
inline double quad_indicator_one(std::span<const int32_t> n_row,
                                 std::span<const double> beta_row,
                                 std::span<const uint8_t> I_row, int32_t v, double pi) {
  std::vector<double> ns_with, betas_with, ns_without, betas_without;
  for (size_t j = 0; j < n_row.size(); ++j) {
    const bool included_other = I_row[j] && static_cast<int32_t>(j) != v;
    if (included_other || static_cast<int32_t>(j) == v) {
      ns_with.push_back(static_cast<double>(n_row[j]));
      betas_with.push_back(beta_row[j]);
    }
    if (included_other) {
      ns_without.push_back(static_cast<double>(n_row[j]));
      betas_without.push_back(beta_row[j]);
    }
  }
  const double m1 = quad_marginal(ns_with, betas_with) * pi;
  const double m0 = ns_without.empty()
                        ? (1.0 - pi)
                        : quad_marginal(ns_without, betas_without) * (1.0 - pi);
  return m1 / (m1 + m0);
}

}  // namespace testsupport
