#include "pclda/light.hpp"

#include <algorithm>

namespace pclda {

double light_word_accept(int32_t n_star_minus_i, int32_t n_cur_minus_i, const HyperParams& h) {
  const double ratio = (h.alpha + static_cast<double>(n_star_minus_i)) /
                       (h.alpha + static_cast<double>(n_cur_minus_i));
  return std::min(1.0, ratio);
}

int32_t light_doc_proposal(std::span<const int32_t> doc_topics, const HyperParams& h,
                           RngStream& rng) {
  const auto n_d = static_cast<double>(doc_topics.size());
  if (doc_topics.empty()) throw domain_error("light_doc_proposal: empty document");
  const double prior_mass = static_cast<double>(h.K) * h.alpha;
  const double u = rng.next_double() * (prior_mass + n_d);
  if (prior_mass > 0.0 && u <= prior_mass)
    return static_cast<int32_t>(rng.next_below(static_cast<uint32_t>(h.K)));
  const auto pos = rng.next_below(static_cast<uint32_t>(doc_topics.size()));
  return doc_topics[pos];
}

LightDocAccept light_doc_accept(double phi_star, double phi_cur, int32_t n_star_minus_i,
                                int32_t n_cur_minus_i, int32_t n_star_full, int32_t n_cur_full,
                                const HyperParams& h) {
  if (!(phi_cur > 0.0)) throw domain_error("light_doc_accept: phi for the current topic is zero");
  const double a = h.alpha;
  LightDocAccept out;
  out.pi_d = std::min(
      1.0, (phi_star * (a + static_cast<double>(n_star_minus_i)) * (a + static_cast<double>(n_cur_full))) /
               (phi_cur * (a + static_cast<double>(n_cur_minus_i)) * (a + static_cast<double>(n_star_full))));
  out.pi_d2 = std::min(1.0, phi_star / phi_cur);
  return out;
}

void light_pclda_sweep(TopicState& s, const Corpus& c, const WordAliasSet& was,
                       const HyperParams& h, WorkScheduler& sched, uint64_t seed, uint64_t sweep,
                       LightAcceptRule rule, SweepCounters* counters) {
  const int P = sched.workers();
  const size_t cells = static_cast<size_t>(s.K) * s.V;

  struct Workspace {
    std::vector<int32_t> nw_delta;
    std::vector<int64_t> nk_delta;
    SweepCounters counters;
  };
  std::vector<Workspace> ws(static_cast<size_t>(P));
  for (auto& w : ws) {
    w.nw_delta.assign(cells, 0);
    w.nk_delta.assign(static_cast<size_t>(s.K), 0);
  }

  sched.run(s.n_docs(), [&](int64_t d, int worker) {
    auto& w = ws[static_cast<size_t>(worker)];
    auto& zd = s.z[d];
    auto& nd = s.doc_topic[d];
    const auto& doc = c.docs[d];
    RngStream rng = make_stream(seed, StreamTag::z_doc, sweep, static_cast<uint64_t>(d));

    w.counters.attributed_loops += static_cast<int64_t>(zd.size());

    auto commit = [&](size_t i, int32_t v, int32_t from, int32_t to) {
      nd.decrement(from);
      nd.increment(to);
      zd[i] = to;
      --w.nw_delta[static_cast<size_t>(from) * s.V + v];
      ++w.nw_delta[static_cast<size_t>(to) * s.V + v];
      --w.nk_delta[from];
      ++w.nk_delta[to];
    };

    for (size_t i = 0; i < zd.size(); ++i) {
      const int32_t v = doc[i];

      // word-proposal step
      {
        const int32_t cur = zd[i];
        const int32_t star = light_word_proposal(was.tables[v], rng);
        ++w.counters.word_proposals;
        if (star == cur) {
          ++w.counters.word_accepts;
        } else {
          const int32_t n_cur_mi = nd.count(cur) - 1;
          const int32_t n_star_mi = nd.count(star);
          const double pi = light_word_accept(n_star_mi, n_cur_mi, h);
          if (rng.next_double() < pi) {
            commit(i, v, cur, star);
            ++w.counters.word_accepts;
          }
        }
      }

      // doc-proposal step
      {
        const int32_t cur = zd[i];
        const int32_t star = light_doc_proposal(zd, h, rng);
        ++w.counters.doc_proposals;
        if (star == cur) {
          ++w.counters.doc_accepts;
        } else {
          const int32_t n_cur_full = nd.count(cur);
          const int32_t n_star_full = nd.count(star);
          const LightDocAccept acc = light_doc_accept(was.phi_col(v, star), was.phi_col(v, cur),
                                                      n_star_full, n_cur_full - 1, n_star_full,
                                                      n_cur_full, h);
          const double pi = rule == LightAcceptRule::pi_d ? acc.pi_d : acc.pi_d2;
          if (rng.next_double() < pi) {
            commit(i, v, cur, star);
            ++w.counters.doc_accepts;
          }
        }
      }
    }
  });

  for (const auto& w : ws) {
    for (size_t i = 0; i < cells; ++i) s.topic_word[i] += w.nw_delta[i];
    for (int32_t k = 0; k < s.K; ++k) s.topic_total[k] += w.nk_delta[k];
    if (counters) counters->add(w.counters);
  }
}

}  // namespace pclda
