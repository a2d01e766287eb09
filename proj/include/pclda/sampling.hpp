#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pclda/rng.hpp"

namespace pclda {

/**
 * Walker-Alias table over K outcomes. Built once in O(K) from nonnegative
 * weights, draws in O(1). `sigma` caches the sum of the input weights so the
 * normalizer can be reused without rescanning (the sigma_a cache of the
 * sparse sampler).
 */
struct AliasTable {
  int32_t K = 0;
  std::vector<double> prob;     // acceptance threshold per cell, in [0,1]
  std::vector<int32_t> alias;   // fallback outcome per cell
  double sigma = 0.0;           // sum of the input weights

  // Exact probability the table assigns to outcome k, reconstructed from the
  // cells; equals weight_k / sigma up to construction round-off.
  double outcome_probability(int32_t k) const;

  bool empty() const { return K == 0; }
};

// Throws domain_error unless at least one weight is positive (negative
// weights are rejected outright).
AliasTable build_alias(std::span<const double> weights);

// One O(1) draw from the table.
inline int32_t alias_draw(const AliasTable& t, RngStream& rng) {
  const auto cell = static_cast<int32_t>(rng.next_below(static_cast<uint32_t>(t.K)));
  return rng.next_double() < t.prob[cell] ? cell : t.alias[cell];
}

// Smallest index i with cumulative[i] > u. Requires 0 <= u < cumulative.back()
// and a nondecreasing vector; zero-mass prefix cells are skipped by the strict
// inequality. O(log n).
int64_t binary_search_categorical(std::span<const double> cumulative, double u);

// Standard normal via Box-Muller (two uniforms per call, none cached).
double sample_normal(RngStream& rng);

// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 uses the boosting identity
// Gamma(a) = Gamma(a+1) * U^(1/a). Returns log of the draw, which stays
// finite down to far smaller values than a direct draw can represent.
double sample_log_gamma(double shape, RngStream& rng);

// exp(sample_log_gamma), clamped away from zero so tiny-shape draws whose
// true value falls below the smallest positive double still come back
// strictly positive.
double sample_gamma(double shape, RngStream& rng);

// Dirichlet draw as normalized gammas, computed in log space with a max
// shift; components are nonnegative and sum to 1 within 1e-12.
std::vector<double> sample_dirichlet(std::span<const double> params, RngStream& rng);

// In-place variant writing into `out` (size = params.size()).
void sample_dirichlet_into(std::span<const double> params, RngStream& rng,
                           std::span<double> out);

/**
 * Hands out iid log-Gamma(shape) draws for a fixed shape, refilling a small
 * chunk at a time from one stream. The rejection constants for the fixed
 * shape are computed once, which is what makes the constant-shape draws for
 * zero-count cells cheap. Every draw is used at most once.
 */
class GammaLogBuffer {
 public:
  GammaLogBuffer(double shape, RngStream& rng);

  double next() {
    if (pos_ == buf_.size()) refill();
    return buf_[pos_++];
  }

 private:
  void refill();

  double shape_;
  double d_, c_;  // Marsaglia-Tsang constants for max(shape, shape+1)
  RngStream& rng_;
  std::vector<double> buf_;
  size_t pos_ = 0;
};

}  // namespace pclda
