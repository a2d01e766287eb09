#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pclda/corpus.hpp"
#include "pclda/rng.hpp"
#include "pclda/state.hpp"

namespace pclda {

// Per-sweep instrumentation shared by all samplers. `attributed_loops` is the
// sparse-sampler work metric: each document contributes N_d * K_d, with K_d
// read when the document is picked up (its n_d row only changes while the
// document itself is being processed, so this equals the sweep-start value).
// `conditional_evals` counts dense conditional cells (K per token).
struct SweepCounters {
  int64_t attributed_loops = 0;
  int64_t executed_loops = 0;    // sigma_b terms actually summed
  int64_t conditional_evals = 0;
  int64_t word_proposals = 0;
  int64_t word_accepts = 0;
  int64_t doc_proposals = 0;
  int64_t doc_accepts = 0;
  int64_t forced_indicator_rows = 0;

  void add(const SweepCounters& o) {
    attributed_loops += o.attributed_loops;
    executed_loops += o.executed_loops;
    conditional_evals += o.conditional_evals;
    word_proposals += o.word_proposals;
    word_accepts += o.word_accepts;
    doc_proposals += o.doc_proposals;
    doc_accepts += o.doc_accepts;
    forced_indicator_rows += o.forced_indicator_rows;
  }
};

// Full conditional over topics for one token, with the token's current
// assignment already removed from all counts. W in the topic-word denominator
// is the vocabulary size V. Normalized; every component > 0 when beta > 0.
std::vector<double> collapsed_conditional(const TopicState& s, const Corpus& c,
                                          const HyperParams& h, int64_t doc, int64_t pos);

// One full sequential sweep in document order, position order; counts are
// maintained incrementally.
void collapsed_sweep(TopicState& s, const Corpus& c, const HyperParams& h, RngStream& rng,
                     SweepCounters* counters = nullptr);

/**
 * Document partitioning for AD-LDA: contiguous blocks, balanced by token
 * count. Every document lands in exactly one partition.
 */
struct AdldaPlan {
  int32_t partitions = 1;
  std::vector<int32_t> doc_partition;
  std::vector<std::pair<int64_t, int64_t>> ranges;  // [begin, end) per partition
};

AdldaPlan make_adlda_plan(const Corpus& c, int32_t partitions);

// Test-only introspection: each partition's private topic-word counts as they
// stood when its pass finished (before reconciliation).
struct AdldaSweepDebug {
  std::vector<std::vector<int32_t>> partition_nw_end;
};

// One AD-LDA sweep: every partition runs a collapsed pass over its documents
// against a private copy of n_w/n_k taken at sweep start, in parallel; the
// global n_w is then reconciled as start + sum of partition deltas (n_k is
// rebuilt from the reconciled n_w). With one partition this is bitwise the
// sequential collapsed sweep.
void adlda_sweep(TopicState& s, const Corpus& c, const HyperParams& h, const AdldaPlan& plan,
                 std::span<RngStream> partition_rngs, SweepCounters* counters = nullptr,
                 AdldaSweepDebug* debug = nullptr);

}  // namespace pclda
