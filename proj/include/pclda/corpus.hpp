#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pclda {

struct PruneReport {
  int64_t dropped_types = 0;
  int64_t dropped_docs = 0;
};

struct CorpusStats {
  int64_t n_tokens = 0;
  int64_t n_docs = 0;
  int64_t vocab_size = 0;
  double mean_doc_length = 0.0;
};

/**
 * Immutable tokenized corpus: documents are sequences of word-type ids into
 * `vocab`. Construction guarantees every token id < V, no document is empty,
 * and the cached totals match the documents. Safe to share across workers.
 */
struct Corpus {
  std::vector<std::vector<int32_t>> docs;
  std::vector<std::string> vocab;
  int64_t n_tokens = 0;
  PruneReport prune_report;  // filled by the pruning operations

  int64_t n_docs() const { return static_cast<int64_t>(docs.size()); }
  int32_t vocab_size() const { return static_cast<int32_t>(vocab.size()); }
};

// UCI Bag-of-Words: three header lines (D, V, NNZ) then 1-indexed
// "docId wordId count" triples; the vocab stream has one word per line.
// Documents that receive no tokens are dropped and counted in prune_report.
Corpus parse_uci_bagofwords(std::istream& docword, std::istream& vocab);

// File-level wrapper with gzip transparency (a .gz suffix or gzip magic is
// decompressed before parsing).
Corpus load_uci_corpus(const std::string& docword_path, const std::string& vocab_path);

// Drop word types with total corpus frequency < min_count, reindex the
// vocabulary densely and drop documents emptied by the pruning.
Corpus prune_rare_words(const Corpus& c, int64_t min_count);

// Keep the v_max word types with the highest tf(w) * ln(D / df(w)) score
// (ties to the lower original id); v_max >= V is the identity.
Corpus select_vocab_tfidf(const Corpus& c, int64_t v_max);

CorpusStats corpus_stats(const Corpus& c);

// FNV-1a over the structure and contents; used to bind snapshots and traces
// to the corpus they were produced from.
uint64_t corpus_hash(const Corpus& c);

// Compact binary snapshot (versioned magic header, little-endian fields).
void save_corpus(const Corpus& c, const std::string& path);
Corpus load_corpus(const std::string& path);

}  // namespace pclda
