#include "pclda/corpus.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "pclda/errors.hpp"

namespace pclda {

namespace {

int64_t parse_header_line(std::istream& in, int line_no, const char* name) {
  std::string line;
  if (!std::getline(in, line))
    throw parse_error("docword header line " + std::to_string(line_no) + " (" + name + ") missing");
  int64_t value = 0;
  std::istringstream ss(line);
  if (!(ss >> value) || value < 0) {
    std::string trailing;
    throw parse_error("docword header line " + std::to_string(line_no) + " (" + name +
                      "): expected a nonnegative integer, got \"" + line + "\"");
  }
  std::string rest;
  if (ss >> rest)
    throw parse_error("docword header line " + std::to_string(line_no) + " (" + name +
                      "): trailing content \"" + rest + "\"");
  return value;
}

// Drops empty document slots, counting them; keeps relative order.
void drop_empty_docs(std::vector<std::vector<int32_t>>& docs, PruneReport& report) {
  size_t kept = 0;
  for (size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].empty()) {
      ++report.dropped_docs;
    } else {
      if (kept != i) docs[kept] = std::move(docs[i]);
      ++kept;
    }
  }
  docs.resize(kept);
}

// Rebuild a corpus keeping only the types flagged in `keep` (old id ->
// retained?), remapping ids densely in ascending original order.
Corpus remap_vocab(const Corpus& c, const std::vector<char>& keep) {
  Corpus out;
  std::vector<int32_t> new_id(c.vocab.size(), -1);
  int32_t next = 0;
  for (size_t v = 0; v < c.vocab.size(); ++v) {
    if (keep[v]) {
      new_id[v] = next++;
      out.vocab.push_back(c.vocab[v]);
    } else {
      ++out.prune_report.dropped_types;
    }
  }
  out.docs.reserve(c.docs.size());
  for (const auto& doc : c.docs) {
    std::vector<int32_t> pruned;
    pruned.reserve(doc.size());
    for (int32_t w : doc)
      if (new_id[w] >= 0) pruned.push_back(new_id[w]);
    out.n_tokens += static_cast<int64_t>(pruned.size());
    out.docs.push_back(std::move(pruned));
  }
  drop_empty_docs(out.docs, out.prune_report);
  return out;
}

std::vector<int64_t> type_frequencies(const Corpus& c) {
  std::vector<int64_t> freq(c.vocab.size(), 0);
  for (const auto& doc : c.docs)
    for (int32_t w : doc) ++freq[w];
  return freq;
}

}  // namespace

Corpus parse_uci_bagofwords(std::istream& docword, std::istream& vocab) {
  const int64_t n_docs = parse_header_line(docword, 1, "D");
  const int64_t n_types = parse_header_line(docword, 2, "V");
  const int64_t nnz = parse_header_line(docword, 3, "NNZ");

  Corpus c;
  c.docs.resize(static_cast<size_t>(n_docs));

  std::string line;
  int line_no = 3;
  int64_t triples = 0;
  while (std::getline(docword, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    int64_t d = 0, w = 0, count = 0;
    if (!(ss >> d >> w >> count))
      throw parse_error("docword line " + std::to_string(line_no) + ": expected \"docId wordId count\", got \"" + line + "\"");
    if (d < 1 || d > n_docs)
      throw bounds_error("docword line " + std::to_string(line_no) + ": docId " + std::to_string(d) +
                         " outside [1, " + std::to_string(n_docs) + "]");
    if (w < 1 || w > n_types)
      throw bounds_error("docword line " + std::to_string(line_no) + ": wordId " + std::to_string(w) +
                         " outside [1, " + std::to_string(n_types) + "]");
    if (count < 1)
      throw value_error("docword line " + std::to_string(line_no) + ": count must be >= 1, got " +
                        std::to_string(count));
    auto& doc = c.docs[static_cast<size_t>(d - 1)];
    doc.insert(doc.end(), static_cast<size_t>(count), static_cast<int32_t>(w - 1));
    c.n_tokens += count;
    ++triples;
  }
  if (triples != nnz)
    throw parse_error("docword: header declares " + std::to_string(nnz) + " triples but " +
                      std::to_string(triples) + " were read");

  c.vocab.reserve(static_cast<size_t>(n_types));
  for (int64_t v = 0; v < n_types; ++v) {
    std::string word;
    if (!std::getline(vocab, word))
      throw parse_error("vocab: expected " + std::to_string(n_types) + " entries, stream ended at " +
                        std::to_string(v));
    while (!word.empty() && (word.back() == '\r' || word.back() == ' ' || word.back() == '\t'))
      word.pop_back();
    c.vocab.push_back(std::move(word));
  }

  drop_empty_docs(c.docs, c.prune_report);
  return c;
}

namespace {

bool looks_gzipped(const std::string& path) {
  if (path.size() >= 3 && path.compare(path.size() - 3, 3, ".gz") == 0) return true;
  std::ifstream f(path, std::ios::binary);
  unsigned char magic[2] = {0, 0};
  f.read(reinterpret_cast<char*>(magic), 2);
  return f.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

std::string read_file_maybe_gzip(const std::string& path) {
  if (looks_gzipped(path)) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (!gz) throw io_error("cannot open " + path);
    std::string content;
    char buf[1 << 16];
    int n;
    while ((n = gzread(gz, buf, sizeof buf)) > 0) content.append(buf, static_cast<size_t>(n));
    const bool bad = n < 0;
    gzclose(gz);
    if (bad) throw io_error("gzip read failed for " + path);
    return content;
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

Corpus load_uci_corpus(const std::string& docword_path, const std::string& vocab_path) {
  std::istringstream docword(read_file_maybe_gzip(docword_path));
  std::istringstream vocab(read_file_maybe_gzip(vocab_path));
  try {
    return parse_uci_bagofwords(docword, vocab);
  } catch (const parse_error& e) {
    throw parse_error(docword_path + ": " + e.what());
  }
}

Corpus prune_rare_words(const Corpus& c, int64_t min_count) {
  if (min_count < 1) throw value_error("prune_rare_words: min_count must be >= 1");
  const auto freq = type_frequencies(c);
  std::vector<char> keep(c.vocab.size());
  for (size_t v = 0; v < keep.size(); ++v) keep[v] = freq[v] >= min_count;
  return remap_vocab(c, keep);
}

Corpus select_vocab_tfidf(const Corpus& c, int64_t v_max) {
  if (v_max < 1) throw value_error("select_vocab_tfidf: v_max must be >= 1");
  if (v_max >= c.vocab_size()) return c;

  const auto tf = type_frequencies(c);
  std::vector<int64_t> df(c.vocab.size(), 0);
  {
    std::vector<char> seen(c.vocab.size());
    for (const auto& doc : c.docs) {
      std::fill(seen.begin(), seen.end(), 0);
      for (int32_t w : doc) {
        if (!seen[w]) {
          seen[w] = 1;
          ++df[w];
        }
      }
    }
  }

  const double d_total = static_cast<double>(c.n_docs());
  std::vector<int32_t> order(c.vocab.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(c.vocab.size(), 0.0);
  for (size_t v = 0; v < score.size(); ++v)
    score[v] = df[v] > 0 ? static_cast<double>(tf[v]) * std::log(d_total / static_cast<double>(df[v]))
                         : 0.0;
  std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;  // ties to the lower original id
  });

  std::vector<char> keep(c.vocab.size(), 0);
  for (int64_t i = 0; i < v_max; ++i) keep[order[static_cast<size_t>(i)]] = 1;
  return remap_vocab(c, keep);
}

CorpusStats corpus_stats(const Corpus& c) {
  CorpusStats s;
  s.n_tokens = c.n_tokens;
  s.n_docs = c.n_docs();
  s.vocab_size = c.vocab_size();
  s.mean_doc_length = s.n_docs > 0 ? static_cast<double>(s.n_tokens) / static_cast<double>(s.n_docs) : 0.0;
  return s;
}

namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

inline void fnv_bytes(uint64_t& h, const void* data, size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

template <typename T>
inline void fnv_value(uint64_t& h, T v) {
  fnv_bytes(h, &v, sizeof v);
}

}  // namespace

uint64_t corpus_hash(const Corpus& c) {
  uint64_t h = kFnvOffset;
  fnv_value(h, c.n_docs());
  fnv_value(h, static_cast<int64_t>(c.vocab_size()));
  fnv_value(h, c.n_tokens);
  for (const auto& doc : c.docs) {
    fnv_value(h, static_cast<int64_t>(doc.size()));
    fnv_bytes(h, doc.data(), doc.size() * sizeof(int32_t));
  }
  for (const auto& w : c.vocab) {
    fnv_value(h, static_cast<int64_t>(w.size()));
    fnv_bytes(h, w.data(), w.size());
  }
  return h;
}

namespace {

constexpr char kCorpusMagic[4] = {'P', 'C', 'B', 'W'};
constexpr uint32_t kCorpusVersion = 1;

template <typename T>
void write_le(std::ostream& out, T v) {
  // static_assert keeps this honest on exotic targets; x86/arm LE is a no-op
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_le(std::istream& in) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw io_error("corpus snapshot: truncated stream");
  return v;
}

}  // namespace

void save_corpus(const Corpus& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out.write(kCorpusMagic, 4);
  write_le(out, kCorpusVersion);
  write_le(out, static_cast<uint64_t>(c.n_docs()));
  write_le(out, static_cast<uint64_t>(c.vocab_size()));
  write_le(out, static_cast<uint64_t>(c.n_tokens));
  for (const auto& doc : c.docs) {
    write_le(out, static_cast<uint64_t>(doc.size()));
    out.write(reinterpret_cast<const char*>(doc.data()),
              static_cast<std::streamsize>(doc.size() * sizeof(int32_t)));
  }
  for (const auto& w : c.vocab) {
    write_le(out, static_cast<uint32_t>(w.size()));
    out.write(w.data(), static_cast<std::streamsize>(w.size()));
  }
  if (!out) throw io_error("write failed for " + path);
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCorpusMagic, 4) != 0)
    throw io_error(path + ": not a corpus snapshot (bad magic)");
  const auto version = read_le<uint32_t>(in);
  if (version != kCorpusVersion)
    throw io_error(path + ": unsupported corpus snapshot version " + std::to_string(version));

  Corpus c;
  const auto n_docs = read_le<uint64_t>(in);
  const auto n_types = read_le<uint64_t>(in);
  const auto n_tokens = read_le<uint64_t>(in);
  c.docs.resize(n_docs);
  for (auto& doc : c.docs) {
    const auto len = read_le<uint64_t>(in);
    doc.resize(len);
    in.read(reinterpret_cast<char*>(doc.data()), static_cast<std::streamsize>(len * sizeof(int32_t)));
    if (!in) throw io_error(path + ": truncated document block");
  }
  c.vocab.resize(n_types);
  for (auto& w : c.vocab) {
    const auto len = read_le<uint32_t>(in);
    w.resize(len);
    in.read(w.data(), len);
    if (!in) throw io_error(path + ": truncated vocab block");
  }
  c.n_tokens = static_cast<int64_t>(n_tokens);

  int64_t check = 0;
  for (const auto& doc : c.docs) {
    check += static_cast<int64_t>(doc.size());
    for (int32_t w : doc)
      if (w < 0 || w >= c.vocab_size()) throw io_error(path + ": token id out of range");
  }
  if (check != c.n_tokens) throw io_error(path + ": token count mismatch");
  return c;
}

}  // namespace pclda
