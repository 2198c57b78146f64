#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "extsum/rouge.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using extsum::ngrams;
using extsum::rouge_n;
using extsum::rouge_n_multi;
using Tokens = std::vector<std::string>;

TEST_CASE("ngrams counts sliding windows") {
  const auto uni = ngrams({"a", "b", "a"}, 1);
  CHECK(uni.total == 3);
  CHECK(uni.counts.at("a") == 2);
  CHECK(uni.counts.at("b") == 1);

  const auto bi = ngrams({"a", "b", "a"}, 2);
  CHECK(bi.total == 2);
  CHECK(bi.counts.at(std::string("a") + '\x1f' + "b") == 1);
  CHECK(bi.counts.at(std::string("b") + '\x1f' + "a") == 1);

  CHECK(ngrams({"a"}, 2).total == 0);
  CHECK(ngrams({}, 1).total == 0);
  CHECK_THROWS_AS(ngrams({"a"}, 0), extsum::Error);
}

TEST_CASE("rouge_n hand-counted examples") {
  const Tokens cand = {"the", "cat", "sat", "on", "the", "mat"};
  const Tokens ref = {"the", "cat", "is", "on", "the", "mat"};

  // unigrams: clipped overlap 5 (the:2, cat:1, on:1, mat:1)
  const auto r1 = rouge_n(cand, ref, 1);
  CHECK(r1.precision == 5.0 / 6.0);
  CHECK(r1.recall == 5.0 / 6.0);
  CHECK(r1.f1 == Catch::Approx(5.0 / 6.0).epsilon(1e-12));

  // bigrams: {the-cat, on-the, the-mat} shared
  const auto r2 = rouge_n(cand, ref, 2);
  CHECK(r2.precision == 3.0 / 5.0);
  CHECK(r2.recall == 3.0 / 5.0);
  CHECK(r2.f1 == Catch::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("rouge_n identity and empty conventions") {
  const Tokens t = {"a", "b", "c", "d"};
  for (int order = 1; order <= 4; ++order) {
    const auto s = rouge_n(t, t, order);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);
  }
  const auto empty_cand = rouge_n({}, t, 1);
  CHECK(empty_cand.precision == 0.0);
  CHECK(empty_cand.recall == 0.0);
  CHECK(empty_cand.f1 == 0.0);
  const auto empty_both = rouge_n({}, {}, 2);
  CHECK(empty_both.f1 == 0.0);
}

TEST_CASE("rouge_n_multi respects sentence boundaries") {
  CHECK(rouge_n_multi({{"a", "b"}}, {{"a", "b"}}, 1).f1 == 1.0);

  // candidate split into two one-token sentences has no bigrams at all
  const auto split = rouge_n_multi({{"a"}, {"b"}}, {{"a", "b"}}, 2);
  CHECK(split.precision == 0.0);
  CHECK(split.recall == 0.0);
  CHECK(split.f1 == 0.0);

  const auto partial = rouge_n_multi({{"x"}}, {{"a"}, {"x"}}, 1);
  CHECK(partial.precision == 1.0);
  CHECK(partial.recall == 0.5);
  CHECK(partial.f1 == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("rouge_n equals the brute-force oracle exactly") {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 3000; ++iter) {
    const int order = 1 + static_cast<int>(rng() % 3);
    const auto cand = testutil::random_tokens(rng, 12);
    const auto ref = testutil::random_tokens(rng, 12);
    const auto got = rouge_n(cand, ref, order);
    const auto want = oracles::brute_rouge(cand, ref, order);
    REQUIRE(got.precision == want.precision);
    REQUIRE(got.recall == want.recall);
    REQUIRE(got.f1 == want.f1);
  }
}

TEST_CASE("rouge_n_multi equals the brute-force oracle exactly") {
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 1000; ++iter) {
    const int order = 1 + static_cast<int>(rng() % 3);
    std::vector<Tokens> cand, ref;
    for (std::size_t i = rng() % 4; i-- > 0;)
      cand.push_back(testutil::random_tokens(rng, 8));
    for (std::size_t i = rng() % 4; i-- > 0;)
      ref.push_back(testutil::random_tokens(rng, 8));
    const auto got = rouge_n_multi(cand, ref, order);
    const auto want = oracles::brute_rouge_multi(cand, ref, order);
    REQUIRE(got.precision == want.precision);
    REQUIRE(got.recall == want.recall);
    REQUIRE(got.f1 == want.f1);
  }
}

TEST_CASE("rouge properties") {
  std::mt19937_64 rng(5150);

  SECTION("precision(c, r) == recall(r, c)") {
    for (int iter = 0; iter < 2000; ++iter) {
      const int order = 1 + static_cast<int>(rng() % 3);
      const auto a = testutil::random_tokens(rng, 10);
      const auto b = testutil::random_tokens(rng, 10);
      REQUIRE(rouge_n(a, b, order).precision == rouge_n(b, a, order).recall);
    }
  }

  SECTION("appending a token absent from the reference never changes overlap") {
    for (int iter = 0; iter < 1000; ++iter) {
      auto cand = testutil::random_tokens(rng, 10);
      const auto ref = testutil::random_tokens(rng, 10);
      const auto before =
          extsum::clipped_overlap(ngrams(cand, 1), ngrams(ref, 1));
      cand.push_back("zz");  // outside the a..e alphabet
      const auto after = extsum::clipped_overlap(ngrams(cand, 1), ngrams(ref, 1));
      REQUIRE(after.overlap == before.overlap);
      REQUIRE(after.candidate_total == before.candidate_total + 1);
    }
  }

  SECTION("bounds and f1 <= max(p, r)") {
    for (int iter = 0; iter < 2000; ++iter) {
      const int order = 1 + static_cast<int>(rng() % 3);
      const auto s = rouge_n(testutil::random_tokens(rng, 12),
                             testutil::random_tokens(rng, 12), order);
      REQUIRE(s.precision >= 0.0);
      REQUIRE(s.precision <= 1.0);
      REQUIRE(s.recall >= 0.0);
      REQUIRE(s.recall <= 1.0);
      REQUIRE(s.f1 >= 0.0);
      REQUIRE(s.f1 <= std::max(s.precision, s.recall) + 1e-15);
    }
  }
}
