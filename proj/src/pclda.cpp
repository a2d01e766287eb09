#include "pclda/pclda.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace pclda {

WordAliasSet build_word_alias_tables(const PhiMatrix& phi, const HyperParams& h,
                                     WorkScheduler& sched) {
  h.validate();
  WordAliasSet was;
  was.K = phi.K();
  was.V = phi.V();
  was.tables.resize(static_cast<size_t>(was.V));
  was.sigma_a.assign(static_cast<size_t>(was.V), 0.0);
  was.phi_t.resize(static_cast<size_t>(was.V) * was.K);

  for (int32_t k = 0; k < was.K; ++k) {
    const auto row = phi.row(k);
    for (int32_t v = 0; v < was.V; ++v) was.phi_t[static_cast<size_t>(v) * was.K + k] = row[v];
  }

  sched.run(was.V, [&](int64_t v, int) {
    const auto col = was.column(static_cast<int32_t>(v));
    std::vector<double> weights(col.size());
    double sum = 0.0;
    for (size_t k = 0; k < col.size(); ++k) {
      weights[k] = h.alpha * col[k];
      sum += weights[k];
    }
    if (sum > 0.0) {
      was.tables[v] = build_alias(weights);
      was.sigma_a[v] = was.tables[v].sigma;
    }
    // all-zero column: empty table, sigma_a stays 0; no token of this type
    // exists, so it is never sampled
  });
  return was;
}

TokenBuckets pclda_token_conditional(const WordAliasSet& was, const DocTopicCounts& doc_counts,
                                     int32_t v, std::vector<double>& scratch) {
  const auto entries = doc_counts.entries();
  scratch.clear();
  const double* col = was.phi_t.data() + static_cast<size_t>(v) * was.K;
  double run = 0.0;
  for (const auto& e : entries) {
    run += col[e.topic] * static_cast<double>(e.count);
    scratch.push_back(run);
  }
  TokenBuckets b;
  b.sigma_a = was.sigma_a[v];
  b.sigma_b = run;
  b.cumulative_b = {scratch.data(), entries.size()};
  return b;
}

int32_t pclda_draw_token(const TokenBuckets& b, const AliasTable& alias_v,
                         const DocTopicCounts& doc_counts, RngStream& rng) {
  const double total = b.sigma_a + b.sigma_b;
  const double u = rng.next_double() * total;
  if (u <= b.sigma_a) return alias_draw(alias_v, rng);
  double u_doc = u - b.sigma_a;
  if (u_doc >= b.sigma_b) u_doc = std::nextafter(b.sigma_b, 0.0);
  const auto idx = static_cast<size_t>(
      std::upper_bound(b.cumulative_b.begin(), b.cumulative_b.end(), u_doc) -
      b.cumulative_b.begin());
  return doc_counts.entries()[idx].topic;
}

namespace {

// Shared row core for the plain and variable-selection Phi draws: log-gamma
// draws per included cell, normalized with a max shift. `include` may be
// null (all cells included). Zero-count cells pull from `beta_buf` when the
// prior is symmetric.
void sample_phi_row(std::span<const int32_t> n_row, double beta, const uint8_t* include,
                    RngStream& rng, GammaLogBuffer& beta_buf, std::span<double> out) {
  const size_t V = n_row.size();
  double max_lg = -HUGE_VAL;
  size_t included = 0;
  for (size_t v = 0; v < V; ++v) {
    if (include && !include[v]) {
      out[v] = -HUGE_VAL;
      continue;
    }
    ++included;
    out[v] = n_row[v] == 0 ? beta_buf.next()
                           : sample_log_gamma(static_cast<double>(n_row[v]) + beta, rng);
    max_lg = std::max(max_lg, out[v]);
  }
  if (included == 1) {
    for (size_t v = 0; v < V; ++v) out[v] = (out[v] == -HUGE_VAL) ? 0.0 : 1.0;
    return;
  }
  double sum = 0.0;
  for (size_t v = 0; v < V; ++v) {
    out[v] = (include && !include[v]) ? 0.0 : std::exp(out[v] - max_lg);
    sum += out[v];
  }
  const double inv = 1.0 / sum;
  for (size_t v = 0; v < V; ++v) {
    if (include && !include[v]) continue;
    out[v] = std::max(out[v] * inv, DBL_MIN);
  }
}

}  // namespace

namespace detail {

void sample_phi_row_masked(std::span<const int32_t> n_row, double beta, const uint8_t* include,
                           RngStream& rng, std::span<double> out) {
  GammaLogBuffer buf(beta, rng);
  sample_phi_row(n_row, beta, include, rng, buf, out);
}

}  // namespace detail

PhiMatrix sample_phi(const TopicState& s, const HyperParams& h, uint64_t seed, uint64_t sweep,
                     WorkScheduler& sched) {
  h.validate();
  PhiMatrix phi(s.K, s.V);
  sched.run(s.K, [&](int64_t k, int) {
    RngStream rng = make_stream(seed, StreamTag::phi_row, sweep, static_cast<uint64_t>(k));
    GammaLogBuffer buf(h.beta, rng);
    sample_phi_row(s.nw_row(static_cast<int32_t>(k)), h.beta, nullptr, rng, buf,
                   phi.row(static_cast<int32_t>(k)));
  });
  return phi;
}

std::vector<double> sample_theta(const TopicState& s, const HyperParams& h, int64_t doc,
                                 RngStream& rng) {
  std::vector<double> params(static_cast<size_t>(s.K), h.alpha);
  for (const auto& e : s.doc_topic[doc].entries())
    params[e.topic] += static_cast<double>(e.count);
  return sample_dirichlet(params, rng);
}

void pclda_sweep(TopicState& s, const Corpus& c, const WordAliasSet& was, const HyperParams& h,
                 WorkScheduler& sched, uint64_t seed, uint64_t sweep, SweepCounters* counters) {
  h.validate();  // alpha itself only enters through the cached sigma_a
  const int P = sched.workers();
  const size_t cells = static_cast<size_t>(s.K) * s.V;

  struct Workspace {
    std::vector<int32_t> nw_delta;
    std::vector<int64_t> nk_delta;
    std::vector<double> scratch;
    SweepCounters counters;
  };
  std::vector<Workspace> ws(static_cast<size_t>(P));
  for (auto& w : ws) {
    w.nw_delta.assign(cells, 0);
    w.nk_delta.assign(static_cast<size_t>(s.K), 0);
    w.scratch.reserve(static_cast<size_t>(s.K));
  }

  sched.run(s.n_docs(), [&](int64_t d, int worker) {
    auto& w = ws[static_cast<size_t>(worker)];
    auto& zd = s.z[d];
    auto& nd = s.doc_topic[d];
    const auto& doc = c.docs[d];
    RngStream rng = make_stream(seed, StreamTag::z_doc, sweep, static_cast<uint64_t>(d));

    w.counters.attributed_loops += static_cast<int64_t>(zd.size()) * nd.nnz();
    for (size_t i = 0; i < zd.size(); ++i) {
      const int32_t v = doc[i];
      const int32_t old_k = zd[i];
      nd.decrement(old_k);
      const TokenBuckets b = pclda_token_conditional(was, nd, v, w.scratch);
      w.counters.executed_loops += nd.nnz();
      const int32_t new_k = pclda_draw_token(b, was.tables[v], nd, rng);
      nd.increment(new_k);
      zd[i] = new_k;
      if (new_k != old_k) {
        --w.nw_delta[static_cast<size_t>(old_k) * s.V + v];
        ++w.nw_delta[static_cast<size_t>(new_k) * s.V + v];
        --w.nk_delta[old_k];
        ++w.nk_delta[new_k];
      }
    }
  });

  // merge at the barrier
  for (const auto& w : ws) {
    for (size_t i = 0; i < cells; ++i) s.topic_word[i] += w.nw_delta[i];
    for (int32_t k = 0; k < s.K; ++k) s.topic_total[k] += w.nk_delta[k];
    if (counters) counters->add(w.counters);
  }
}

}  // namespace pclda
