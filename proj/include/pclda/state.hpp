#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pclda/corpus.hpp"
#include "pclda/errors.hpp"
#include "pclda/rng.hpp"

namespace pclda {

struct HyperParams {
  double alpha = 0.1;  // symmetric document-topic prior
  double beta = 0.01;  // symmetric topic-word prior
  int32_t K = 100;

  void validate() const {
    if (!(alpha > 0.0)) throw domain_error("HyperParams: alpha must be > 0");
    if (!(beta > 0.0)) throw domain_error("HyperParams: beta must be > 0");
    if (K < 1) throw domain_error("HyperParams: K must be >= 1");
  }
};

/**
 * Sparse per-document topic counts, kept sorted by topic. Lookup and update
 * are O(log K_d); iterating the entries visits only the topics present in
 * the document, which is what keeps the sparse sampler at O(K_d) per token.
 */
class DocTopicCounts {
 public:
  struct Entry {
    int32_t topic;
    int32_t count;
  };

  int32_t count(int32_t topic) const {
    const auto it = find(topic);
    return it != entries_.end() && it->topic == topic ? it->count : 0;
  }

  void increment(int32_t topic) {
    const auto it = find(topic);
    if (it != entries_.end() && it->topic == topic)
      ++it->count;
    else
      entries_.insert(it, Entry{topic, 1});
  }

  // Removes the entry when its count reaches zero.
  void decrement(int32_t topic) {
    const auto it = find(topic);
    if (it == entries_.end() || it->topic != topic || it->count <= 0)
      throw state_error("DocTopicCounts: decrement of zero count");
    if (--it->count == 0) entries_.erase(it);
  }

  std::span<const Entry> entries() const { return entries_; }
  int32_t nnz() const { return static_cast<int32_t>(entries_.size()); }
  void clear() { entries_.clear(); }

 private:
  std::vector<Entry>::iterator find(int32_t topic) {
    return std::lower_bound(entries_.begin(), entries_.end(), topic,
                            [](const Entry& e, int32_t t) { return e.topic < t; });
  }
  std::vector<Entry>::const_iterator find(int32_t topic) const {
    return std::lower_bound(entries_.begin(), entries_.end(), topic,
                            [](const Entry& e, int32_t t) { return e.topic < t; });
  }

  std::vector<Entry> entries_;
};

/**
 * Topic indicators plus every derived count. The indicators are stored per
 * document (contiguous within a document) so a sweep touches memory doc by
 * doc; n_w is dense K x V, n_d is sparse per document.
 */
struct TopicState {
  int32_t K = 0;
  int32_t V = 0;
  std::vector<std::vector<int32_t>> z;   // parallel to corpus docs
  std::vector<DocTopicCounts> doc_topic; // n_d
  std::vector<int32_t> topic_word;       // n_w, row-major K x V
  std::vector<int64_t> topic_total;      // n_k

  int32_t& nw(int32_t k, int32_t v) { return topic_word[static_cast<size_t>(k) * V + v]; }
  int32_t nw(int32_t k, int32_t v) const { return topic_word[static_cast<size_t>(k) * V + v]; }
  std::span<const int32_t> nw_row(int32_t k) const {
    return {topic_word.data() + static_cast<size_t>(k) * V, static_cast<size_t>(V)};
  }

  int64_t n_docs() const { return static_cast<int64_t>(z.size()); }
  int64_t n_tokens() const;
};

// Row-stochastic K x V matrix; rows sum to 1 within 1e-12. Zero entries are
// exact zeros only under variable selection.
class PhiMatrix {
 public:
  PhiMatrix() = default;
  PhiMatrix(int32_t k, int32_t v) : k_(k), v_(v), data_(static_cast<size_t>(k) * v, 0.0) {}

  int32_t K() const { return k_; }
  int32_t V() const { return v_; }
  double at(int32_t k, int32_t v) const { return data_[static_cast<size_t>(k) * v_ + v]; }
  double& at(int32_t k, int32_t v) { return data_[static_cast<size_t>(k) * v_ + v]; }
  std::span<double> row(int32_t k) { return {data_.data() + static_cast<size_t>(k) * v_, static_cast<size_t>(v_)}; }
  std::span<const double> row(int32_t k) const {
    return {data_.data() + static_cast<size_t>(k) * v_, static_cast<size_t>(v_)};
  }
  std::span<const double> flat() const { return data_; }

 private:
  int32_t k_ = 0, v_ = 0;
  std::vector<double> data_;
};

// Uniform random assignment of every token; deterministic for a fixed
// (corpus, K, seed) no matter which sampler or worker count follows.
TopicState init_state(const Corpus& c, int32_t K, RngStream& rng);

// Counts rebuilt from scratch out of z; the consistency oracle for the
// incremental updates.
TopicState recount(const TopicState& s, const Corpus& c);

// True when all four count structures agree.
bool counts_equal(const TopicState& a, const TopicState& b);

// Throws state_error if any TopicState invariant fails.
void check_state(const TopicState& s, const Corpus& c);

// Fraction of strictly positive entries.
double sparsity(std::span<const int32_t> matrix);
double sparsity_nw(const TopicState& s);
double sparsity_nd(const TopicState& s);

// Versioned binary dump of z (plus K and the corpus hash), enough to resume
// or to hand an identical initialization to every sampler.
void save_state(const TopicState& s, uint64_t corpus_hash, const std::string& path);
TopicState load_state(const std::string& path, const Corpus& c);

}  // namespace pclda
