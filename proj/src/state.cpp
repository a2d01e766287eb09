#include "pclda/state.hpp"

#include <cstring>
#include <fstream>

namespace pclda {

int64_t TopicState::n_tokens() const {
  int64_t n = 0;
  for (const auto& doc : z) n += static_cast<int64_t>(doc.size());
  return n;
}

TopicState init_state(const Corpus& c, int32_t K, RngStream& rng) {
  if (K < 1) throw domain_error("init_state: K must be >= 1");
  TopicState s;
  s.K = K;
  s.V = c.vocab_size();
  s.z.resize(c.docs.size());
  s.doc_topic.resize(c.docs.size());
  s.topic_word.assign(static_cast<size_t>(K) * s.V, 0);
  s.topic_total.assign(static_cast<size_t>(K), 0);

  for (size_t d = 0; d < c.docs.size(); ++d) {
    const auto& doc = c.docs[d];
    auto& zd = s.z[d];
    zd.resize(doc.size());
    for (size_t i = 0; i < doc.size(); ++i) {
      const auto k = static_cast<int32_t>(rng.next_below(static_cast<uint32_t>(K)));
      zd[i] = k;
      s.doc_topic[d].increment(k);
      ++s.nw(k, doc[i]);
      ++s.topic_total[k];
    }
  }
  return s;
}

TopicState recount(const TopicState& s, const Corpus& c) {
  TopicState r;
  r.K = s.K;
  r.V = s.V;
  r.z = s.z;
  r.doc_topic.resize(s.z.size());
  r.topic_word.assign(static_cast<size_t>(s.K) * s.V, 0);
  r.topic_total.assign(static_cast<size_t>(s.K), 0);
  for (size_t d = 0; d < s.z.size(); ++d) {
    for (size_t i = 0; i < s.z[d].size(); ++i) {
      const int32_t k = s.z[d][i];
      r.doc_topic[d].increment(k);
      ++r.nw(k, c.docs[d][i]);
      ++r.topic_total[k];
    }
  }
  return r;
}

bool counts_equal(const TopicState& a, const TopicState& b) {
  if (a.K != b.K || a.V != b.V) return false;
  if (a.topic_word != b.topic_word || a.topic_total != b.topic_total) return false;
  if (a.doc_topic.size() != b.doc_topic.size()) return false;
  for (size_t d = 0; d < a.doc_topic.size(); ++d) {
    const auto ea = a.doc_topic[d].entries();
    const auto eb = b.doc_topic[d].entries();
    if (ea.size() != eb.size()) return false;
    for (size_t i = 0; i < ea.size(); ++i)
      if (ea[i].topic != eb[i].topic || ea[i].count != eb[i].count) return false;
  }
  return true;
}

void check_state(const TopicState& s, const Corpus& c) {
  if (s.n_docs() != c.n_docs()) throw state_error("check_state: document count mismatch");
  int64_t total = 0;
  for (size_t d = 0; d < s.z.size(); ++d) {
    if (s.z[d].size() != c.docs[d].size()) throw state_error("check_state: z length mismatch");
    int64_t doc_sum = 0;
    for (const auto& e : s.doc_topic[d].entries()) {
      if (e.count <= 0) throw state_error("check_state: nonpositive n_d entry");
      doc_sum += e.count;
    }
    if (doc_sum != static_cast<int64_t>(s.z[d].size()))
      throw state_error("check_state: n_d row does not sum to N_d");
  }
  for (int32_t k = 0; k < s.K; ++k) {
    int64_t row = 0;
    for (int32_t v = 0; v < s.V; ++v) {
      if (s.nw(k, v) < 0) throw state_error("check_state: negative n_w entry");
      row += s.nw(k, v);
    }
    if (row != s.topic_total[k]) throw state_error("check_state: n_w row does not sum to n_k");
    total += row;
  }
  if (total != s.n_tokens() || total != c.n_tokens)
    throw state_error("check_state: counts do not sum to N");
  if (!counts_equal(s, recount(s, c))) throw state_error("check_state: recount mismatch");
}

double sparsity(std::span<const int32_t> matrix) {
  if (matrix.empty()) return 0.0;
  int64_t positive = 0;
  for (int32_t x : matrix)
    if (x > 0) ++positive;
  return static_cast<double>(positive) / static_cast<double>(matrix.size());
}

double sparsity_nw(const TopicState& s) { return sparsity(s.topic_word); }

double sparsity_nd(const TopicState& s) {
  const int64_t cells = s.n_docs() * s.K;
  if (cells == 0) return 0.0;
  int64_t positive = 0;
  for (const auto& row : s.doc_topic) positive += row.nnz();
  return static_cast<double>(positive) / static_cast<double>(cells);
}

namespace {

constexpr char kStateMagic[4] = {'P', 'C', 'S', 'T'};
constexpr uint32_t kStateVersion = 1;

template <typename T>
void write_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_le(std::istream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw io_error(path + ": truncated state snapshot");
  return v;
}

}  // namespace

void save_state(const TopicState& s, uint64_t corpus_hash, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out.write(kStateMagic, 4);
  write_le(out, kStateVersion);
  write_le(out, corpus_hash);
  write_le(out, s.K);
  write_le(out, static_cast<uint64_t>(s.z.size()));
  for (const auto& zd : s.z) {
    write_le(out, static_cast<uint64_t>(zd.size()));
    out.write(reinterpret_cast<const char*>(zd.data()),
              static_cast<std::streamsize>(zd.size() * sizeof(int32_t)));
  }
  if (!out) throw io_error("write failed for " + path);
}

TopicState load_state(const std::string& path, const Corpus& c) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kStateMagic, 4) != 0)
    throw io_error(path + ": not a state snapshot (bad magic)");
  const auto version = read_le<uint32_t>(in, path);
  if (version != kStateVersion)
    throw io_error(path + ": unsupported state snapshot version " + std::to_string(version));
  const auto hash = read_le<uint64_t>(in, path);
  if (hash != corpus_hash(c))
    throw io_error(path + ": snapshot was produced from a different corpus");
  const auto K = read_le<int32_t>(in, path);
  const auto n_docs = read_le<uint64_t>(in, path);
  if (n_docs != static_cast<uint64_t>(c.n_docs()))
    throw io_error(path + ": document count mismatch");

  TopicState s;
  s.K = K;
  s.V = c.vocab_size();
  s.z.resize(n_docs);
  for (size_t d = 0; d < n_docs; ++d) {
    const auto len = read_le<uint64_t>(in, path);
    if (len != c.docs[d].size()) throw io_error(path + ": document length mismatch");
    s.z[d].resize(len);
    in.read(reinterpret_cast<char*>(s.z[d].data()),
            static_cast<std::streamsize>(len * sizeof(int32_t)));
    if (!in) throw io_error(path + ": truncated z block");
    for (int32_t k : s.z[d])
      if (k < 0 || k >= K) throw io_error(path + ": topic indicator out of range");
  }
  // rebuild the derived counts
  TopicState rebuilt = recount(s, c);
  return rebuilt;
}

}  // namespace pclda
