#pragma once

#include <cstdint>
#include <span>

#include "pclda/pclda.hpp"

namespace pclda {

// O(1) word proposal: a topic drawn proportional to the Phi column of the
// token's word type (the alias tables are scale invariant, so the
// alpha-scaled tables of WordAliasSet serve unchanged).
inline int32_t light_word_proposal(const AliasTable& alias_phi_v, RngStream& rng) {
  return alias_draw(alias_phi_v, rng);
}

// pi_w = min{1, (alpha + n_d[z*]^-i) / (alpha + n_d[z_i]^-i)}
double light_word_accept(int32_t n_star_minus_i, int32_t n_cur_minus_i, const HyperParams& h);

// Two-phase doc proposal: U ~ Uniform(0, K*alpha + N_d); the prior phase
// picks a topic uniformly, the likelihood phase picks the topic of a
// uniformly chosen token position (counts include the current token).
int32_t light_doc_proposal(std::span<const int32_t> doc_topics, const HyperParams& h,
                           RngStream& rng);

// Both printed acceptance variants for the doc proposal. pi_d mixes -i and
// full counts; pi_d2 is the simplified ratio phi*/phi. Only pi_d2 satisfies
// detailed balance for either proposal form (the transition-matrix tests
// document this), so sweeps default to it.
struct LightDocAccept {
  double pi_d;
  double pi_d2;
};

LightDocAccept light_doc_accept(double phi_star, double phi_cur, int32_t n_star_minus_i,
                                int32_t n_cur_minus_i, int32_t n_star_full, int32_t n_cur_full,
                                const HyperParams& h);

enum class LightAcceptRule { pi_d2, pi_d };

// Cyclic Metropolis-Hastings sweep: per token a word-proposal step committed
// on accept, then a doc-proposal step. Document-parallel exactly like
// pclda_sweep.
void light_pclda_sweep(TopicState& s, const Corpus& c, const WordAliasSet& was,
                       const HyperParams& h, WorkScheduler& sched, uint64_t seed, uint64_t sweep,
                       LightAcceptRule rule = LightAcceptRule::pi_d2,
                       SweepCounters* counters = nullptr);

}  // namespace pclda
