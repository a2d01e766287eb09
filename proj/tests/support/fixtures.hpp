#pragma once

// Shared corpora, generators and dense oracles for the test suites.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pclda/corpus.hpp"
#include "pclda/rng.hpp"
#include "pclda/sampling.hpp"
#include "pclda/state.hpp"

namespace testsupport {

inline pclda::Corpus make_corpus(std::vector<std::vector<int32_t>> docs, int32_t vocab_size) {
  pclda::Corpus c;
  c.docs = std::move(docs);
  for (int32_t v = 0; v < vocab_size; ++v) c.vocab.push_back("w" + std::to_string(v));
  for (const auto& d : c.docs) c.n_tokens += static_cast<int64_t>(d.size());
  return c;
}

// The tiny instance used everywhere an exact enumeration is needed:
// D=3, N=8, V=4 so K=2 gives 256 configurations. Word types are shared
// across documents, which keeps label-mode switching fast enough for
// empirical-vs-exact comparisons at modest sample counts.
inline pclda::Corpus tiny_corpus() {
  return make_corpus({{0, 1, 2}, {1, 2, 3}, {0, 3}}, 4);
}

// Synthetic corpus from the LDA generative model itself; small enough to run
// chains on, structured enough that samplers have something to find.
struct SyntheticSpec {
  int64_t n_docs = 100;
  int32_t vocab = 100;
  int32_t topics = 10;
  int32_t doc_length = 50;       // fixed length
  double alpha_gen = 0.08;       // concentration of theta
  double beta_gen = 0.05;        // concentration of phi rows
  uint64_t seed = 42;
};

inline pclda::Corpus synthetic_corpus(const SyntheticSpec& spec) {
  pclda::RngStream rng(spec.seed, 0xc0ffee);
  std::vector<std::vector<double>> phi(static_cast<size_t>(spec.topics));
  std::vector<double> beta_params(static_cast<size_t>(spec.vocab), spec.beta_gen);
  for (auto& row : phi) row = pclda::sample_dirichlet(beta_params, rng);

  std::vector<pclda::AliasTable> topic_tables;
  topic_tables.reserve(phi.size());
  for (const auto& row : phi) topic_tables.push_back(pclda::build_alias(row));

  std::vector<double> alpha_params(static_cast<size_t>(spec.topics), spec.alpha_gen);
  std::vector<std::vector<int32_t>> docs;
  docs.reserve(static_cast<size_t>(spec.n_docs));
  for (int64_t d = 0; d < spec.n_docs; ++d) {
    const auto theta = pclda::sample_dirichlet(alpha_params, rng);
    const auto theta_table = pclda::build_alias(theta);
    std::vector<int32_t> doc(static_cast<size_t>(spec.doc_length));
    for (auto& w : doc) {
      const int32_t k = pclda::alias_draw(theta_table, rng);
      w = pclda::alias_draw(topic_tables[static_cast<size_t>(k)], rng);
    }
    docs.push_back(std::move(doc));
  }
  return make_corpus(std::move(docs), spec.vocab);
}

// Dense evaluation of the token conditional phi[k][v] * (alpha + n_d[k]),
// normalized: the O(K) oracle the two-bucket draw must match.
inline std::vector<double> dense_token_conditional(const pclda::PhiMatrix& phi,
                                                   const pclda::DocTopicCounts& nd, int32_t v,
                                                   double alpha) {
  std::vector<double> p(static_cast<size_t>(phi.K()));
  double total = 0.0;
  for (int32_t k = 0; k < phi.K(); ++k) {
    p[k] = phi.at(k, v) * (alpha + static_cast<double>(nd.count(k)));
    total += p[k];
  }
  for (double& x : p) x /= total;
  return p;
}

// A random sparse document-topic count row for randomized exactness checks.
inline pclda::DocTopicCounts random_doc_counts(int32_t K, pclda::RngStream& rng,
                                               int32_t max_tokens = 40) {
  pclda::DocTopicCounts nd;
  const auto n = rng.next_below(static_cast<uint32_t>(max_tokens + 1));
  for (uint32_t i = 0; i < n; ++i)
    nd.increment(static_cast<int32_t>(rng.next_below(static_cast<uint32_t>(K))));
  return nd;
}

inline pclda::PhiMatrix random_phi(int32_t K, int32_t V, pclda::RngStream& rng) {
  pclda::PhiMatrix phi(K, V);
  std::vector<double> params(static_cast<size_t>(V));
  for (int32_t k = 0; k < K; ++k) {
    for (auto& p : params) p = 0.2 + 2.0 * rng.next_double();
    pclda::sample_dirichlet_into(params, rng, phi.row(k));
  }
  return phi;
}

}  // namespace testsupport
