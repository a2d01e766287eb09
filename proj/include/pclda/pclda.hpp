#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pclda/collapsed.hpp"
#include "pclda/corpus.hpp"
#include "pclda/rng.hpp"
#include "pclda/sampling.hpp"
#include "pclda/scheduler.hpp"
#include "pclda/state.hpp"

namespace pclda {

/**
 * Per-word-type alias tables over topics, built from the weights
 * alpha * phi[k][v], plus the cached normalizers sigma_a[v] and a transposed
 * copy of Phi for column access in the z-phase. Rebuilt after every Phi draw;
 * immutable and shared by all workers during a sweep.
 *
 * Word types whose Phi column is entirely zero (possible only under variable
 * selection, for types absent from the corpus) get an empty table that is
 * never drawn from.
 */
struct WordAliasSet {
  int32_t K = 0;
  int32_t V = 0;
  std::vector<AliasTable> tables;
  std::vector<double> sigma_a;
  std::vector<double> phi_t;  // V x K

  double phi_col(int32_t v, int32_t k) const { return phi_t[static_cast<size_t>(v) * K + k]; }
  std::span<const double> column(int32_t v) const {
    return {phi_t.data() + static_cast<size_t>(v) * K, static_cast<size_t>(K)};
  }
};

WordAliasSet build_word_alias_tables(const PhiMatrix& phi, const HyperParams& h,
                                     WorkScheduler& sched);

// The two-bucket decomposition of the token conditional
// phi[k][v] * (alpha + n_d[k])  =  alpha*phi[k][v]  +  phi[k][v]*n_d[k]:
// sigma_a is the prior bucket total (cached per word type), sigma_b the
// document bucket total, computed by iterating only the nonzero document
// topic counts. cumulative_b is aligned with doc_counts.entries().
struct TokenBuckets {
  double sigma_a = 0.0;
  double sigma_b = 0.0;
  std::span<const double> cumulative_b;
};

// doc_counts must exclude the token being resampled. `scratch` backs
// cumulative_b and is reused across tokens.
TokenBuckets pclda_token_conditional(const WordAliasSet& was, const DocTopicCounts& doc_counts,
                                     int32_t v, std::vector<double>& scratch);

// Draw U ~ Uniform(0, sigma_a + sigma_b): the prior bucket resolves through
// the alias table in O(1), the document bucket by binary search over the
// cumulative weights in O(log K_d). The marginal equals the normalized dense
// conditional exactly.
int32_t pclda_draw_token(const TokenBuckets& b, const AliasTable& alias_v,
                         const DocTopicCounts& doc_counts, RngStream& rng);

// Row k of Phi drawn from Dirichlet(n_w[k][.] + beta), rows in parallel on
// per-topic streams. Zero-count cells share one constant-shape gamma buffer
// per row (iid draws, so exactness is unaffected).
PhiMatrix sample_phi(const TopicState& s, const HyperParams& h, uint64_t seed, uint64_t sweep,
                     WorkScheduler& sched);

// Diagnostic draw theta_d ~ Dirichlet(n_d[d][.] + alpha); not part of the
// z-chain.
std::vector<double> sample_theta(const TopicState& s, const HyperParams& h, int64_t doc,
                                 RngStream& rng);

// One Gibbs sweep of z | Phi, document-parallel with job stealing. Worker
// local n_w/n_k deltas merge at the closing barrier. Per-document streams
// keyed by (seed, sweep, doc) make the result identical for any worker count
// and any steal order.
void pclda_sweep(TopicState& s, const Corpus& c, const WordAliasSet& was, const HyperParams& h,
                 WorkScheduler& sched, uint64_t seed, uint64_t sweep,
                 SweepCounters* counters = nullptr);

namespace detail {
// Dirichlet row core shared by the plain, variable-selection and diagnostic
// Phi draws: log-gamma per included cell (null mask = all), max-shift
// normalization, excluded cells exactly zero.
void sample_phi_row_masked(std::span<const int32_t> n_row, double beta, const uint8_t* include,
                           RngStream& rng, std::span<double> out);
}  // namespace detail

}  // namespace pclda
