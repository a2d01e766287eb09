#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pclda/pclda.hpp"

namespace pclda {

/**
 * Binary inclusion indicators for the spike-and-slab prior on Phi. The
 * invariants I[k][v] = 1 wherever n_w[k][v] > 0 and "every row keeps at
 * least one 1" are maintained by vs_sweep.
 */
struct IndicatorMatrix {
  int32_t K = 0;
  int32_t V = 0;
  std::vector<uint8_t> inc;

  IndicatorMatrix() = default;
  IndicatorMatrix(int32_t k, int32_t v, uint8_t fill = 1)
      : K(k), V(v), inc(static_cast<size_t>(k) * v, fill) {}

  uint8_t at(int32_t k, int32_t v) const { return inc[static_cast<size_t>(k) * V + v]; }
  uint8_t& at(int32_t k, int32_t v) { return inc[static_cast<size_t>(k) * V + v]; }
  std::span<uint8_t> row(int32_t k) { return {inc.data() + static_cast<size_t>(k) * V, static_cast<size_t>(V)}; }
  std::span<const uint8_t> row(int32_t k) const {
    return {inc.data() + static_cast<size_t>(k) * V, static_cast<size_t>(V)};
  }
};

// p(I[v] = 1 | I[-v], n, pi) for a zero-count cell, from the two-point
// posterior with masses
//   p1 ~ Gamma(S_b + beta_v) / Gamma(S_n + S_b + beta_v) * pi
//   p0 ~ Gamma(S_b)          / Gamma(S_n + S_b)          * (1 - pi)
// where S_b and S_n sum beta and counts over the currently included types
// other than v. Log-space evaluation; cells with n[v] > 0 return 1.
double indicator_one_probability(std::span<const int32_t> n_w_row,
                                 std::span<const double> beta_row,
                                 std::span<const uint8_t> I_row, int32_t v, double pi_k);

// One two-point draw, writing the result into I_row[v].
int sample_indicator(std::span<const int32_t> n_w_row, std::span<const double> beta_row,
                     std::span<uint8_t> I_row, int32_t v, double pi_k, RngStream& rng);

// Conditional Dirichlet row: included entries ~ Dir(beta + n over the
// included set), excluded entries exactly zero. Throws state_error on a
// positive count with a zero indicator or an all-zero indicator row.
std::vector<double> sample_phi_vs(std::span<const int32_t> n_w_row,
                                  std::span<const uint8_t> I_row,
                                  std::span<const double> beta_row, RngStream& rng);

// Replaces the Phi draw of one outer iteration: per topic row (rows in
// parallel), resample the indicators of all zero-count types sequentially in
// ascending type order, then draw the row from the conditional Dirichlet.
// An empty topic whose indicators all came up zero gets its last candidate
// forced to 1 (counted in the returned value).
int64_t vs_sweep(const TopicState& s, IndicatorMatrix& ind, const HyperParams& h,
                 std::span<const double> pi, WorkScheduler& sched, uint64_t seed, uint64_t sweep,
                 PhiMatrix& phi_out);

// Fraction of exactly-zero entries of Phi.
double prop_zeros(const PhiMatrix& phi);

}  // namespace pclda
