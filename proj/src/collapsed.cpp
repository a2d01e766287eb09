#include "pclda/collapsed.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pclda/sampling.hpp"

namespace pclda {

namespace {

// Dense conditional into `cum` as an unnormalized cumulative sum; returns the
// total. Counts must already exclude the token being resampled.
double conditional_cumulative(const TopicState& s, const HyperParams& h, int64_t doc, int32_t v,
                              std::span<const int32_t> nw, std::span<const int64_t> nk,
                              std::span<double> cum) {
  const int32_t K = s.K;
  const double vbeta = h.beta * static_cast<double>(s.V);
  const auto entries = s.doc_topic[doc].entries();
  size_t ei = 0;
  double total = 0.0;
  for (int32_t k = 0; k < K; ++k) {
    int32_t ndk = 0;
    if (ei < entries.size() && entries[ei].topic == k) ndk = entries[ei++].count;
    const double topic_word = (static_cast<double>(nw[static_cast<size_t>(k) * s.V + v]) + h.beta) /
                              (static_cast<double>(nk[k]) + vbeta);
    total += topic_word * (static_cast<double>(ndk) + h.alpha);
    cum[k] = total;
  }
  return total;
}

// Resample every token of docs [begin, end) against the given topic-word
// counts (global or a partition's private copy). z and n_d update in place.
void collapsed_pass(TopicState& s, const Corpus& c, const HyperParams& h, int64_t begin,
                    int64_t end, std::span<int32_t> nw, std::span<int64_t> nk, RngStream& rng,
                    SweepCounters* counters) {
  const int32_t K = s.K;
  const int32_t V = s.V;
  std::vector<double> cum(static_cast<size_t>(K));
  for (int64_t d = begin; d < end; ++d) {
    auto& zd = s.z[d];
    auto& nd = s.doc_topic[d];
    const auto& doc = c.docs[d];
    for (size_t i = 0; i < zd.size(); ++i) {
      const int32_t v = doc[i];
      const int32_t old_k = zd[i];
      nd.decrement(old_k);
      --nw[static_cast<size_t>(old_k) * V + v];
      --nk[old_k];

      const double total = conditional_cumulative(s, h, d, v, nw, nk, cum);
      double u = rng.next_double() * total;
      if (u >= total) u = std::nextafter(total, 0.0);
      const auto new_k = static_cast<int32_t>(
          std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());

      zd[i] = new_k;
      nd.increment(new_k);
      ++nw[static_cast<size_t>(new_k) * V + v];
      ++nk[new_k];
      if (counters) counters->conditional_evals += K;
    }
  }
}

}  // namespace

std::vector<double> collapsed_conditional(const TopicState& s, const Corpus& c,
                                          const HyperParams& h, int64_t doc, int64_t pos) {
  std::vector<double> cum(static_cast<size_t>(s.K));
  const int32_t v = c.docs[doc][pos];
  const double total =
      conditional_cumulative(s, h, doc, v, s.topic_word, s.topic_total, cum);
  std::vector<double> p(static_cast<size_t>(s.K));
  double prev = 0.0;
  for (int32_t k = 0; k < s.K; ++k) {
    p[k] = (cum[k] - prev) / total;
    prev = cum[k];
  }
  return p;
}

void collapsed_sweep(TopicState& s, const Corpus& c, const HyperParams& h, RngStream& rng,
                     SweepCounters* counters) {
  collapsed_pass(s, c, h, 0, s.n_docs(), s.topic_word, s.topic_total, rng, counters);
}

AdldaPlan make_adlda_plan(const Corpus& c, int32_t partitions) {
  if (partitions < 1) throw domain_error("make_adlda_plan: partitions must be >= 1");
  AdldaPlan plan;
  plan.partitions = partitions;
  plan.doc_partition.resize(static_cast<size_t>(c.n_docs()));
  plan.ranges.assign(static_cast<size_t>(partitions), {0, 0});

  const double target = static_cast<double>(c.n_tokens) / static_cast<double>(partitions);
  int32_t p = 0;
  int64_t cum = 0;
  int64_t begin = 0;
  for (int64_t d = 0; d < c.n_docs(); ++d) {
    plan.doc_partition[d] = p;
    cum += static_cast<int64_t>(c.docs[d].size());
    const bool boundary = p < partitions - 1 &&
                          static_cast<double>(cum) >= target * static_cast<double>(p + 1);
    if (boundary) {
      plan.ranges[p] = {begin, d + 1};
      begin = d + 1;
      ++p;
    }
  }
  plan.ranges[p] = {begin, c.n_docs()};
  for (int32_t q = p + 1; q < partitions; ++q) plan.ranges[q] = {c.n_docs(), c.n_docs()};
  return plan;
}

void adlda_sweep(TopicState& s, const Corpus& c, const HyperParams& h, const AdldaPlan& plan,
                 std::span<RngStream> partition_rngs, SweepCounters* counters,
                 AdldaSweepDebug* debug) {
  const int32_t P = plan.partitions;
  if (static_cast<int32_t>(partition_rngs.size()) != P)
    throw domain_error("adlda_sweep: need one RngStream per partition");

  if (P == 1) {
    collapsed_pass(s, c, h, 0, s.n_docs(), s.topic_word, s.topic_total, partition_rngs[0],
                   counters);
    if (debug) debug->partition_nw_end = {s.topic_word};
    return;
  }

  // private copies taken at sweep start; the shared state is read-only until
  // reconciliation
  std::vector<std::vector<int32_t>> nw_copy(static_cast<size_t>(P), s.topic_word);
  std::vector<std::vector<int64_t>> nk_copy(static_cast<size_t>(P), s.topic_total);
  std::vector<SweepCounters> local(static_cast<size_t>(P));

  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(P));
  for (int32_t p = 0; p < P; ++p) {
    threads.emplace_back([&, p] {
      const auto [begin, end] = plan.ranges[p];
      collapsed_pass(s, c, h, begin, end, nw_copy[p], nk_copy[p], partition_rngs[p],
                     counters ? &local[p] : nullptr);
    });
  }
  for (auto& t : threads) t.join();

  if (debug) debug->partition_nw_end = nw_copy;

  // n_w_global = n_w_start + sum_p (n_w_p_end - n_w_start); s.topic_word still
  // holds n_w_start here, so accumulate the deltas in place
  const size_t cells = s.topic_word.size();
  std::vector<int32_t> start(s.topic_word);
  for (int32_t p = 0; p < P; ++p) {
    const auto& end_p = nw_copy[p];
    for (size_t i = 0; i < cells; ++i) s.topic_word[i] += end_p[i] - start[i];
  }
  for (int32_t k = 0; k < s.K; ++k) {
    int64_t row = 0;
    const auto r = s.nw_row(k);
    for (int32_t v = 0; v < s.V; ++v) row += r[v];
    s.topic_total[k] = row;
  }
  if (counters)
    for (const auto& l : local) counters->add(l);
}

}  // namespace pclda
