#include <doctest.h>

#include "pearl/rng.hpp"
#include "pearl/text.hpp"

using namespace pearl;

TEST_CASE("tokenize lowercases and splits on whitespace and punctuation") {
  CHECK(text::tokenize("Hello, World!") == std::vector<std::string>{"hello", "world"});
  CHECK(text::tokenize("it's a test") == std::vector<std::string>{"it", "s", "a", "test"});
  CHECK(text::tokenize("  ") == std::vector<std::string>{});
  CHECK(text::tokenize("a2b c") == std::vector<std::string>{"a2b", "c"});
}

TEST_CASE("word counting is whitespace-delimited") {
  CHECK(text::word_count("a b  c\n d") == 4);
  CHECK(text::word_count("") == 0);
  CHECK(text::word_count("one-token,still") == 1);
}

TEST_CASE("truncate_words caps the token count without splitting") {
  CHECK(text::truncate_words("one two three", 2) == "one two");
  CHECK(text::truncate_words("one two", 5) == "one two");
  const std::string s = "alpha beta gamma delta";
  const auto truncated = text::truncate_words(s, 3);
  const auto full = text::whitespace_tokens(s);
  const auto left = text::whitespace_tokens(truncated);
  REQUIRE(left.size() == 3);
  for (std::size_t i = 0; i < left.size(); ++i) CHECK(left[i] == full[i]);
}

TEST_CASE("stopwords and content words") {
  CHECK(text::is_stopword("the"));
  CHECK_FALSE(text::is_stopword("launch"));
  CHECK(text::content_words("Write a post about: the launch") ==
        std::vector<std::string>{"write", "post", "launch"});
}

TEST_CASE("token n-grams") {
  const std::vector<std::string> toks{"a", "b", "c"};
  CHECK(text::ngrams(toks, 2) == std::vector<std::string>{"a b", "b c"});
  CHECK(text::ngrams(toks, 4).empty());
  CHECK(text::ngrams(toks, 1) == toks);
}

TEST_CASE("character trigrams normalize case and whitespace") {
  CHECK(text::char_trigrams("ab").empty());
  CHECK(text::char_trigrams("abcd") == std::set<std::string>{"abc", "bcd"});
  CHECK(text::char_trigrams("A  b") == text::char_trigrams("a b"));
}

TEST_CASE("sub_seed gives distinct deterministic streams") {
  CHECK(sub_seed(7, "partition") == sub_seed(7, "partition"));
  CHECK(sub_seed(7, "partition") != sub_seed(7, "negatives"));
  CHECK(sub_seed(7, "partition") != sub_seed(8, "partition"));
}

TEST_CASE("next_below is bounded and deterministic") {
  SplitMix64 a(42);
  SplitMix64 b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_below(17);
    CHECK(x < 17);
    CHECK(x == b.next_below(17));
  }
}

TEST_CASE("sample_indices draws distinct indices") {
  SplitMix64 rng(3);
  const auto picks = rng.sample_indices(10, 4);
  REQUIRE(picks.size() == 4);
  for (std::size_t i = 0; i < picks.size(); ++i) {
    CHECK(picks[i] < 10);
    for (std::size_t j = i + 1; j < picks.size(); ++j) CHECK(picks[i] != picks[j]);
  }
  CHECK(rng.sample_indices(3, 9).size() == 3);
}
