#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "extsum/corpus.hpp"
#include "testutil.hpp"

using extsum::Document;
using extsum::Error;
using extsum::Sentence;
using extsum::tokenize;

TEST_CASE("tokenize basics") {
  CHECK(tokenize("The cat sat.") == std::vector<std::string>{"the", "cat", "sat"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n ").empty());
  CHECK(tokenize("ONE two Three") == std::vector<std::string>{"one", "two", "three"});
}

TEST_CASE("tokenize punctuation table, frozen cases") {
  // edge punctuation stripped, interior punctuation kept
  CHECK(tokenize("Hello, world—again") ==
        std::vector<std::string>{"hello", "world—again"});
  CHECK(tokenize("(hello).") == std::vector<std::string>{"hello"});
  CHECK(tokenize("'tis") == std::vector<std::string>{"tis"});
  CHECK(tokenize("don't stop") == std::vector<std::string>{"don't", "stop"});
  CHECK(tokenize("3.5 per-cent") == std::vector<std::string>{"3.5", "per-cent"});
  CHECK(tokenize("— …").empty());  // pure punctuation pieces drop
  CHECK(tokenize("“Quoted”") == std::vector<std::string>{"quoted"});
  CHECK(tokenize("Ärzte sagen JA") ==
        std::vector<std::string>{"ärzte", "sagen", "ja"});
  // non-breaking space splits
  CHECK(tokenize("a b") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tokenize is idempotent after normalization") {
  std::mt19937_64 rng(42);
  const std::string pool = "aBc d.,!?-'\"(x) Y\tz:;";
  for (int iter = 0; iter < 500; ++iter) {
    std::string text;
    const int len = static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) text.push_back(pool[rng() % pool.size()]);
    const auto once = tokenize(text);
    const auto twice = tokenize(testutil::join(once));
    CHECK(once == twice);
  }
}

TEST_CASE("split_sentences basics") {
  CHECK(extsum::split_sentences("A. B? C!") ==
        std::vector<std::string>{"A.", "B?", "C!"});
  CHECK(extsum::split_sentences("one sentence") ==
        std::vector<std::string>{"one sentence"});
  CHECK(extsum::split_sentences("").empty());
}

TEST_CASE("split_sentences honors the abbreviation list") {
  CHECK(extsum::split_sentences("Dr. Smith left. He returned.") ==
        std::vector<std::string>{"Dr. Smith left.", "He returned."});
  CHECK(extsum::split_sentences("The U.S. Army said so. Nobody argued.") ==
        std::vector<std::string>{"The U.S. Army said so.", "Nobody argued."});
  CHECK(extsum::split_sentences("It cost $3. Then it doubled.") ==
        std::vector<std::string>{"It cost $3.", "Then it doubled."});
}

TEST_CASE("split_sentences keeps closers and lowercase continuations") {
  CHECK(extsum::split_sentences("He said \"go.\" She went.") ==
        std::vector<std::string>{"He said \"go.\"", "She went."});
  // lowercase after the period: no split
  CHECK(extsum::split_sentences("see p. 4 for details") ==
        std::vector<std::string>{"see p. 4 for details"});
}

TEST_CASE("read_corpus minimal and labeled records") {
  testutil::TempDir tmp("corpus");
  const auto path = tmp.file("c.jsonl");
  testutil::write_file(path,
                       R"({"id":"a","sentences":["X y."]})"
                       "\n"
                       R"({"id":"b","sentences":["s1.","s2.","s3."],"labels":[1,0,1]})"
                       "\n");
  const auto docs = extsum::read_corpus(path);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].id == "a");
  REQUIRE(docs[0].sentences.size() == 1);
  CHECK(docs[0].sentences[0].raw == "X y.");
  CHECK(docs[0].sentences[0].tokens == std::vector<std::string>{"x", "y"});
  CHECK_FALSE(docs[0].labels.has_value());
  REQUIRE(docs[1].labels.has_value());
  CHECK(*docs[1].labels == std::vector<int>{1, 0, 1});
}

TEST_CASE("read_corpus rejects bad records with line numbers") {
  testutil::TempDir tmp("corpus_err");

  SECTION("label length mismatch") {
    const auto path = tmp.file("bad.jsonl");
    testutil::write_file(
        path, R"({"id":"a","sentences":["s1.","s2.","s3."],"labels":[1,0]})" "\n");
    CHECK_THROWS_WITH(extsum::read_corpus(path),
                      Catch::Matchers::ContainsSubstring("label length mismatch") &&
                          Catch::Matchers::ContainsSubstring(":1"));
  }
  SECTION("malformed JSON names the line") {
    const auto path = tmp.file("bad.jsonl");
    testutil::write_file(path,
                         R"({"id":"a","sentences":["ok."]})" "\n" "{oops\n");
    CHECK_THROWS_WITH(extsum::read_corpus(path),
                      Catch::Matchers::ContainsSubstring(":2"));
  }
  SECTION("duplicate id") {
    const auto path = tmp.file("bad.jsonl");
    testutil::write_file(path,
                         R"({"id":"a","sentences":["x."]})" "\n"
                         R"({"id":"a","sentences":["y."]})" "\n");
    CHECK_THROWS_WITH(extsum::read_corpus(path),
                      Catch::Matchers::ContainsSubstring("duplicate"));
  }
  SECTION("empty sentences array") {
    const auto path = tmp.file("bad.jsonl");
    testutil::write_file(path, R"({"id":"a","sentences":[]})" "\n");
    CHECK_THROWS_AS(extsum::read_corpus(path), Error);
  }
  SECTION("labels must be binary") {
    const auto path = tmp.file("bad.jsonl");
    testutil::write_file(
        path, R"({"id":"a","sentences":["x."],"labels":[2]})" "\n");
    CHECK_THROWS_AS(extsum::read_corpus(path), Error);
  }
  SECTION("labels must select something") {
    const auto path = tmp.file("bad.jsonl");
    testutil::write_file(
        path, R"({"id":"a","sentences":["x.","y."],"labels":[0,0]})" "\n");
    CHECK_THROWS_AS(extsum::read_corpus(path), Error);
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(extsum::read_corpus(tmp.file("nope.jsonl")), Error);
  }
}

TEST_CASE("read_corpus ignores unknown keys and blank lines") {
  testutil::TempDir tmp("corpus_extra");
  const auto path = tmp.file("c.jsonl");
  testutil::write_file(path,
                       "\n"
                       R"({"id":"a","sentences":["x."],"source":"cnn","extra":1})"
                       "\n\n");
  const auto docs = extsum::read_corpus(path);
  REQUIRE(docs.size() == 1);

  // and write_corpus never emits them back
  const auto out = tmp.file("out.jsonl");
  extsum::write_corpus(docs, out);
  CHECK(testutil::read_file(out).find("extra") == std::string::npos);
}

TEST_CASE("corpus round-trips exactly") {
  testutil::TempDir tmp("corpus_rt");
  std::mt19937_64 rng(7);

  SECTION("randomized corpora") {
    for (int iter = 0; iter < 25; ++iter) {
      std::vector<Document> docs;
      const int count = 1 + static_cast<int>(rng() % 6);
      for (int i = 0; i < count; ++i) {
        Document doc = testutil::random_document(rng, "doc" + std::to_string(i), 1, 6);
        if (rng() % 2 == 0) doc.abstractive.reset();
        if (rng() % 2 == 0) {
          std::vector<int> labels(doc.sentences.size(), 0);
          labels[rng() % labels.size()] = 1;
          doc.labels = labels;
        }
        docs.push_back(std::move(doc));
      }
      const auto path = tmp.file("rt.jsonl");
      extsum::write_corpus(docs, path);
      CHECK(extsum::read_corpus(path) == docs);
    }
  }
  SECTION("empty corpus gives an empty file") {
    const auto path = tmp.file("empty.jsonl");
    extsum::write_corpus({}, path);
    CHECK(testutil::read_file(path).empty());
    CHECK(extsum::read_corpus(path).empty());
  }
  SECTION("labels and abstractive preserved verbatim") {
    Document doc;
    doc.id = "keep";
    doc.sentences = {Sentence::from_raw("First one."), Sentence::from_raw("Second!")};
    doc.abstractive = {{Sentence::from_raw("A summary, with “quotes”.")}};
    doc.labels = {{1, 0}};
    const auto path = tmp.file("keep.jsonl");
    extsum::write_corpus({doc}, path);
    const auto back = extsum::read_corpus(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == doc);
  }
}

TEST_CASE("write_corpus validates invariants") {
  testutil::TempDir tmp("corpus_w");
  Document doc;
  doc.id = "bad";
  doc.sentences = {Sentence::from_raw("x.")};
  doc.labels = {{0}};
  CHECK_THROWS_AS(extsum::write_corpus({doc}, tmp.file("w.jsonl")), Error);
}
