#include "pclda/sampling.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "pclda/errors.hpp"

namespace pclda {

double AliasTable::outcome_probability(int32_t k) const {
  double p = prob[k];
  for (int32_t cell = 0; cell < K; ++cell) {
    if (alias[cell] == k) p += 1.0 - prob[cell];
  }
  return p / static_cast<double>(K);
}

AliasTable build_alias(std::span<const double> weights) {
  const auto k = static_cast<int32_t>(weights.size());
  if (k == 0) throw domain_error("build_alias: empty weight vector");

  double sigma = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw domain_error("build_alias: weight must be finite and >= 0");
    sigma += w;
  }
  if (sigma <= 0.0) throw domain_error("build_alias: all weights are zero");

  AliasTable t;
  t.K = k;
  t.sigma = sigma;
  t.prob.resize(k);
  t.alias.resize(k);

  // Vose construction: scale to mean 1, then pair small cells with large ones.
  std::vector<double> scaled(k);
  const double scale = static_cast<double>(k) / sigma;
  for (int32_t i = 0; i < k; ++i) scaled[i] = weights[i] * scale;

  std::vector<int32_t> small, large;
  small.reserve(k);
  large.reserve(k);
  for (int32_t i = 0; i < k; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);

  while (!small.empty() && !large.empty()) {
    const int32_t s = small.back();
    small.pop_back();
    const int32_t l = large.back();
    t.prob[s] = scaled[s];
    t.alias[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      small.push_back(l);
      large.pop_back();
    }
  }
  // leftovers are exactly 1 up to round-off
  for (int32_t i : large) {
    t.prob[i] = 1.0;
    t.alias[i] = i;
  }
  for (int32_t i : small) {
    t.prob[i] = 1.0;
    t.alias[i] = i;
  }
  return t;
}

int64_t binary_search_categorical(std::span<const double> cumulative, double u) {
  if (cumulative.empty()) throw domain_error("binary_search_categorical: empty vector");
  if (!(u >= 0.0) || u >= cumulative.back())
    throw domain_error("binary_search_categorical: u outside [0, total)");
  return std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
}

double sample_normal(RngStream& rng) {
  const double u1 = 1.0 - rng.next_double();  // (0, 1]
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

namespace {

// Marsaglia-Tsang core for shape >= 1.
inline double gamma_ge1(double d, double c, RngStream& rng) {
  for (;;) {
    double x, v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_double();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline void gamma_constants(double shape, double& d, double& c) {
  d = shape - 1.0 / 3.0;
  c = 1.0 / (3.0 * std::sqrt(d));
}

}  // namespace

double sample_log_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw domain_error("sample_gamma: shape must be > 0");
  double d, c;
  if (shape >= 1.0) {
    gamma_constants(shape, d, c);
    return std::log(gamma_ge1(d, c, rng));
  }
  gamma_constants(shape + 1.0, d, c);
  const double g = gamma_ge1(d, c, rng);
  const double u = 1.0 - rng.next_double();  // (0, 1]
  return std::log(g) + std::log(u) / shape;
}

double sample_gamma(double shape, RngStream& rng) {
  return std::max(std::exp(sample_log_gamma(shape, rng)), DBL_MIN);
}

std::vector<double> sample_dirichlet(std::span<const double> params, RngStream& rng) {
  std::vector<double> out(params.size());
  sample_dirichlet_into(params, rng, out);
  return out;
}

void sample_dirichlet_into(std::span<const double> params, RngStream& rng,
                           std::span<double> out) {
  const size_t n = params.size();
  if (n == 0) throw domain_error("sample_dirichlet: empty parameter vector");
  if (out.size() != n) throw domain_error("sample_dirichlet: output size mismatch");
  for (double a : params)
    if (!(a > 0.0)) throw domain_error("sample_dirichlet: parameters must be > 0");

  if (n == 1) {
    out[0] = 1.0;
    return;
  }
  double max_lg = -HUGE_VAL;
  for (size_t i = 0; i < n; ++i) {
    out[i] = sample_log_gamma(params[i], rng);
    max_lg = std::max(max_lg, out[i]);
  }
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    out[i] = std::exp(out[i] - max_lg);
    sum += out[i];
  }
  const double inv = 1.0 / sum;
  for (size_t i = 0; i < n; ++i) out[i] = std::max(out[i] * inv, DBL_MIN);
}

GammaLogBuffer::GammaLogBuffer(double shape, RngStream& rng) : shape_(shape), rng_(rng) {
  if (!(shape > 0.0)) throw domain_error("GammaLogBuffer: shape must be > 0");
  gamma_constants(shape >= 1.0 ? shape : shape + 1.0, d_, c_);
  buf_.reserve(256);
}

void GammaLogBuffer::refill() {
  buf_.resize(256);
  if (shape_ >= 1.0) {
    for (double& x : buf_) x = std::log(gamma_ge1(d_, c_, rng_));
  } else {
    for (double& x : buf_) {
      const double g = gamma_ge1(d_, c_, rng_);
      const double u = 1.0 - rng_.next_double();
      x = std::log(g) + std::log(u) / shape_;
    }
  }
  pos_ = 0;
}

}  // namespace pclda
