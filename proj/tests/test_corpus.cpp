#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <map>
#include <sstream>

#include "pclda/corpus.hpp"
#include "pclda/errors.hpp"
#include "support/fixtures.hpp"

using namespace pclda;

namespace {

Corpus parse(const std::string& docword, const std::string& vocab) {
  std::istringstream dw(docword), vs(vocab);
  return parse_uci_bagofwords(dw, vs);
}

// (doc, word) -> count multiset of a corpus, the round-trip form
std::map<std::pair<int64_t, int32_t>, int64_t> triples(const Corpus& c) {
  std::map<std::pair<int64_t, int32_t>, int64_t> m;
  for (int64_t d = 0; d < c.n_docs(); ++d)
    for (int32_t w : c.docs[d]) ++m[{d, w}];
  return m;
}

}  // namespace

TEST_CASE("parse: direct expansion of the format") {
  const Corpus c = parse("2\n3\n2\n1 1 2\n2 3 1\n", "apple\nbanana\ncherry\n");
  CHECK(c.n_docs() == 2);
  CHECK(c.vocab_size() == 3);
  CHECK(c.n_tokens == 3);
  CHECK(c.docs[0] == std::vector<int32_t>{0, 0});
  CHECK(c.docs[1] == std::vector<int32_t>{2});
  CHECK(c.vocab[1] == "banana");
}

TEST_CASE("parse: empty corpus") {
  const Corpus c = parse("0\n0\n0\n", "");
  CHECK(c.n_docs() == 0);
  CHECK(c.n_tokens == 0);
}

TEST_CASE("parse: errors name the offending line") {
  CHECK_THROWS_AS(parse("2\n3\n1\n1 4 1\n", "a\nb\nc\n"), bounds_error);
  CHECK_THROWS_AS(parse("2\n3\n1\n3 1 1\n", "a\nb\nc\n"), bounds_error);
  CHECK_THROWS_AS(parse("2\n3\n1\n1 1 0\n", "a\nb\nc\n"), value_error);
  CHECK_THROWS_AS(parse("2\n3\n1\n1 1 -2\n", "a\nb\nc\n"), value_error);
  CHECK_THROWS_AS(parse("not-a-number\n3\n0\n", "a\nb\nc\n"), parse_error);
  CHECK_THROWS_AS(parse("2\n3\n", "a\nb\nc\n"), parse_error);            // missing NNZ line
  CHECK_THROWS_AS(parse("1\n1\n2\n1 1 1\n", "a\n"), parse_error);        // NNZ mismatch
  CHECK_THROWS_AS(parse("1\n2\n1\n1 1 1\n", "a\n"), parse_error);        // short vocab
  try {
    parse("2\n3\n1\nbogus line\n", "a\nb\nc\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("parse: documents with no triples are dropped and counted") {
  const Corpus c = parse("3\n2\n2\n1 1 1\n3 2 1\n", "a\nb\n");
  CHECK(c.n_docs() == 2);
  CHECK(c.prune_report.dropped_docs == 1);
}

TEST_CASE("round-trip: expansion reproduces the (doc, word, count) multiset") {
  const std::string docword = "3\n4\n5\n1 1 2\n1 3 1\n2 2 4\n3 4 2\n3 1 1\n";
  const Corpus c = parse(docword, "a\nb\nc\nd\n");
  const auto got = triples(c);
  const std::map<std::pair<int64_t, int32_t>, int64_t> want{
      {{0, 0}, 2}, {{0, 2}, 1}, {{1, 1}, 4}, {{2, 3}, 2}, {{2, 0}, 1}};
  CHECK(got == want);
}

TEST_CASE("prune_rare_words: thresholding, identity and total pruning") {
  SUBCASE("threshold keeps only frequent types") {
    // a appears 12 times, b 3 times
    std::vector<std::vector<int32_t>> docs{{0, 0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 0, 1, 1}};
    const Corpus c = testsupport::make_corpus(std::move(docs), 2);
    const Corpus pruned = prune_rare_words(c, 10);
    CHECK(pruned.vocab_size() == 1);
    CHECK(pruned.vocab[0] == "w0");
    CHECK(pruned.prune_report.dropped_types == 1);
    CHECK(pruned.n_tokens == 12);
  }
  SUBCASE("min_count 1 is the identity") {
    const Corpus c = testsupport::tiny_corpus();
    const Corpus pruned = prune_rare_words(c, 1);
    CHECK(pruned.docs == c.docs);
    CHECK(pruned.vocab == c.vocab);
  }
  SUBCASE("pruning everything yields the legal empty corpus") {
    std::vector<std::vector<int32_t>> docs{{0, 0, 1, 1}, {0, 1, 0, 1, 0, 1}};
    const Corpus c = testsupport::make_corpus(std::move(docs), 2);
    const Corpus pruned = prune_rare_words(c, 6);
    CHECK(pruned.n_docs() == 0);
    CHECK(pruned.vocab_size() == 0);
    CHECK(pruned.prune_report.dropped_types == 2);
    CHECK(pruned.prune_report.dropped_docs == 2);
  }
  SUBCASE("idempotence on a mixed corpus") {
    testsupport::SyntheticSpec spec;
    spec.n_docs = 40;
    spec.vocab = 60;
    spec.doc_length = 12;
    const Corpus c = testsupport::synthetic_corpus(spec);
    const Corpus once = prune_rare_words(c, 5);
    const Corpus twice = prune_rare_words(once, 5);
    CHECK(once.docs == twice.docs);
    CHECK(once.vocab == twice.vocab);
  }
}

TEST_CASE("select_vocab_tfidf") {
  SUBCASE("v_max >= V is the identity") {
    const Corpus c = testsupport::tiny_corpus();
    const Corpus out = select_vocab_tfidf(c, 10);
    CHECK(out.docs == c.docs);
    CHECK(out.vocab == c.vocab);
  }
  SUBCASE("a ubiquitous term has idf zero and loses to any non-ubiquitous one") {
    // type 0 in both docs (idf = 0), type 1 in one doc once
    std::vector<std::vector<int32_t>> docs{{0, 0, 0, 1}, {0, 0, 0}};
    const Corpus c = testsupport::make_corpus(std::move(docs), 2);
    const Corpus out = select_vocab_tfidf(c, 1);
    CHECK(out.vocab == std::vector<std::string>{"w1"});
  }
  SUBCASE("5-type toy corpus matches the hand-computed score table") {
    // docs: d0 = [a a b c], d1 = [a d d e], d2 = [b d e e]  (a=0 .. e=4)
    // tf: a=3 b=2 c=1 d=3 e=3; df: a=2 b=2 c=1 d=2 e=2; D=3
    // score = tf * ln(D/df): a=3ln1.5=1.216 b=2ln1.5=0.811 c=ln3=1.099
    //         d=3ln1.5=1.216 e=3ln1.5=1.216
    // top-2 by score, ties to lower id: a then d
    std::vector<std::vector<int32_t>> docs{{0, 0, 1, 2}, {0, 3, 3, 4}, {1, 3, 4, 4}};
    const Corpus c = testsupport::make_corpus(std::move(docs), 5);
    const Corpus out = select_vocab_tfidf(c, 2);
    CHECK(out.vocab == std::vector<std::string>{"w0", "w3"});
    CHECK(out.n_docs() == 3);  // every doc keeps at least one token here
    CHECK(out.prune_report.dropped_types == 3);
  }
  SUBCASE("output vocabulary size is min(v_max, V)") {
    testsupport::SyntheticSpec spec;
    spec.n_docs = 30;
    spec.vocab = 50;
    spec.doc_length = 20;
    const Corpus c = testsupport::synthetic_corpus(spec);
    for (const int64_t v_max : {1, 7, 49, 50, 99})
      CHECK(select_vocab_tfidf(c, v_max).vocab_size() ==
            std::min<int64_t>(v_max, c.vocab_size()));
  }
}

TEST_CASE("corpus_stats") {
  const Corpus c = parse("2\n3\n2\n1 1 2\n2 3 1\n", "a\nb\nc\n");
  const CorpusStats s = corpus_stats(c);
  CHECK(s.n_tokens == 3);
  CHECK(s.n_docs == 2);
  CHECK(s.vocab_size == 3);
  CHECK(s.mean_doc_length == doctest::Approx(1.5));

  const CorpusStats empty = corpus_stats(Corpus{});
  CHECK(empty.n_tokens == 0);
  CHECK(empty.n_docs == 0);
  CHECK(empty.vocab_size == 0);
  CHECK(empty.mean_doc_length == 0.0);
}

TEST_CASE("binary snapshot round-trips and checks integrity") {
  testsupport::SyntheticSpec spec;
  spec.n_docs = 25;
  spec.vocab = 40;
  spec.doc_length = 9;
  const Corpus c = testsupport::synthetic_corpus(spec);
  const std::string path = "corpus_roundtrip.bin";
  save_corpus(c, path);
  const Corpus back = load_corpus(path);
  CHECK(back.docs == c.docs);
  CHECK(back.vocab == c.vocab);
  CHECK(back.n_tokens == c.n_tokens);
  CHECK(corpus_hash(back) == corpus_hash(c));
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_corpus("does_not_exist.bin"), io_error);
}

TEST_CASE("gzip transparency on the text format") {
  const std::string docword = "2\n3\n2\n1 1 2\n2 3 1\n";
  const std::string vocab = "a\nb\nc\n";
  const std::string dw_path = "gz_docword.txt";
  const std::string vs_path = "gz_vocab.txt";
  {
    std::FILE* f = std::fopen(dw_path.c_str(), "wb");
    std::fwrite(docword.data(), 1, docword.size(), f);
    std::fclose(f);
    f = std::fopen(vs_path.c_str(), "wb");
    std::fwrite(vocab.data(), 1, vocab.size(), f);
    std::fclose(f);
  }
  REQUIRE(std::system(("gzip -f " + dw_path).c_str()) == 0);
  const Corpus c = load_uci_corpus(dw_path + ".gz", vs_path);
  CHECK(c.n_tokens == 3);
  CHECK(c.docs[1] == std::vector<int32_t>{2});
  std::remove((dw_path + ".gz").c_str());
  std::remove(vs_path.c_str());
}

TEST_CASE("corpus hash is sensitive to content") {
  const Corpus a = parse("2\n3\n2\n1 1 2\n2 3 1\n", "a\nb\nc\n");
  Corpus b = a;
  b.docs[0][0] = 1;
  CHECK(corpus_hash(a) != corpus_hash(b));
}
