#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>

#include "pearl/auxlm.hpp"
#include "pearl/error.hpp"
#include "pearl/rng.hpp"
#include "support/oracles.hpp"

using namespace pearl;
using pearl::testsupport::oracle_log_likelihood;

namespace {

corpus::Document doc(const std::string& id, const std::string& text) {
  return corpus::Document{id, "u", text, std::nullopt};
}

}  // namespace

TEST_CASE("train_ngram counts events with boundary padding") {
  const auto model = auxlm::train_ngram({"a b"}, 2, 0.1);
  CHECK(model.count({"a"}, "b") == 1);
  CHECK(model.count({auxlm::kBos}, "a") == 1);
  CHECK(model.count({}, "a") == 1);
  CHECK(model.count({}, "b") == 1);
  CHECK(model.vocabulary().contains("a"));
  CHECK(model.vocabulary().contains(auxlm::kUnk));
  CHECK_FALSE(model.vocabulary().contains(auxlm::kBos));
}

TEST_CASE("duplicated training text doubles counts and keeps equal events equal") {
  const auto once = auxlm::train_ngram({"a b"}, 2, 0.1);
  const auto twice = auxlm::train_ngram({"a b", "a b"}, 2, 0.1);
  CHECK(twice.count({"a"}, "b") == 2 * once.count({"a"}, "b"));
  CHECK(twice.count({}, "a") == 2 * once.count({}, "a"));
  // a and b are seen equally often, so their unigram probabilities stay tied.
  CHECK(once.prob("a", {}) == doctest::Approx(once.prob("b", {})).epsilon(1e-12));
  CHECK(twice.prob("a", {}) == doctest::Approx(twice.prob("b", {})).epsilon(1e-12));
}

TEST_CASE("unseen tokens map to UNK") {
  const auto model = auxlm::train_ngram({"a b"}, 2, 0.1);
  CHECK(model.map_token("zebra") == auxlm::kUnk);
  CHECK(model.map_token("a") == "a");
  CHECK(model.prob("zebra", {}) == doctest::Approx(model.prob(auxlm::kUnk, {})).epsilon(1e-15));
}

TEST_CASE("train_ngram rejects an empty text list") {
  CHECK_THROWS_AS(auxlm::train_ngram({}, 3, 0.1), std::invalid_argument);
}

TEST_CASE("untrained uniform model: add-1 smoothing over three symbols") {
  auxlm::NGramModel model(3, 1.0);
  model.add_vocab_token("a");
  model.add_vocab_token("b");
  // vocabulary is {a, b, <unk>}; every per-order estimate is 1/3.
  auxlm::ConditionalContext ctx;
  ctx.cache_weight = 0.0;
  const double ll = auxlm::log_likelihood(model, "a b", ctx);
  CHECK(ll == doctest::Approx(2.0 * std::log(1.0 / 3.0)).epsilon(1e-12));

  // Structural check: L tokens contribute exactly L equal terms here.
  const double ll4 = auxlm::log_likelihood(model, "a b a b", ctx);
  CHECK(ll4 == doctest::Approx(4.0 * std::log(1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("matching context raises the likelihood (oracle-checked)") {
  const std::vector<std::string> train{"a b c d", "b c a a"};
  const auto model = auxlm::train_ngram(train, 3, 0.1);
  const std::string target = "a b c";

  auxlm::ConditionalContext matching;
  matching.segments = {target};
  matching.cache_weight = 0.8;
  auxlm::ConditionalContext empty;
  empty.cache_weight = 0.8;

  const double with_ctx = auxlm::log_likelihood(model, target, matching);
  const double without_ctx = auxlm::log_likelihood(model, target, empty);

  const auto weights = auxlm::default_interpolation_weights(3);
  CHECK(with_ctx ==
        doctest::Approx(oracle_log_likelihood(train, 3, 0.1, weights, target, {target}, 0.8))
            .epsilon(1e-12));
  CHECK(without_ctx ==
        doctest::Approx(oracle_log_likelihood(train, 3, 0.1, weights, target, {}, 0.8))
            .epsilon(1e-12));
  CHECK(with_ctx > without_ctx);
}

TEST_CASE("oracle equivalence on random tiny models") {
  SplitMix64 rng(2024);
  const std::vector<std::string> alphabet{"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 20; ++trial) {
    const int order = 1 + static_cast<int>(rng.next_below(3));
    const double k = 0.1 + rng.next_double();
    const double lambda = 0.9 * rng.next_double();
    const std::size_t vocab = 2 + rng.next_below(4);

    const auto random_text = [&](std::size_t len) {
      std::string s;
      for (std::size_t i = 0; i < len; ++i) {
        if (i) s += ' ';
        s += alphabet[rng.next_below(vocab)];
      }
      return s;
    };

    std::vector<std::string> train;
    const auto n_texts = 1 + rng.next_below(3);
    for (std::size_t i = 0; i < n_texts; ++i) train.push_back(random_text(2 + rng.next_below(6)));
    const auto target = random_text(1 + rng.next_below(4));
    std::vector<std::string> segments;
    if (rng.next_below(2) == 1) segments.push_back(random_text(1 + rng.next_below(5)));

    const auto model = auxlm::train_ngram(train, order, k);
    auxlm::ConditionalContext ctx{segments, lambda};
    const double got = auxlm::log_likelihood(model, target, ctx);
    const double want = oracle_log_likelihood(train, order, k,
                                              auxlm::default_interpolation_weights(order), target,
                                              segments, lambda);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("combined per-token distribution normalizes over the vocabulary") {
  const auto model = auxlm::train_ngram({"a b c a", "c b"}, 3, 0.1);
  auxlm::ConditionalContext ctx;
  ctx.segments = {"b c"};
  ctx.cache_weight = 0.4;
  double total = 0.0;
  for (const auto& tok : model.vocabulary()) {
    total += std::exp(auxlm::log_likelihood(model, tok, ctx));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  // And the bare n-gram distribution for assorted histories.
  for (const std::vector<std::string> hist :
       {std::vector<std::string>{}, {"a"}, {"a", "b"}, {"zzz"}, {auxlm::kBos, "a"}}) {
    double sum = 0.0;
    for (const auto& tok : model.vocabulary()) sum += model.prob(tok, hist);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("adding a context occurrence never lowers that token's cache share") {
  const auto model = auxlm::train_ngram({"a b c"}, 2, 0.5);
  std::vector<std::string> segments;
  double prev = -std::numeric_limits<double>::infinity();
  for (int reps = 0; reps < 6; ++reps) {
    auxlm::ConditionalContext ctx{segments, 0.9};
    const double ll = auxlm::log_likelihood(model, "a", ctx);
    if (reps > 0) CHECK(ll >= prev);
    prev = ll;
    segments.push_back("a");
  }
}

TEST_CASE("benefit_score is the difference of conditional likelihoods") {
  const auto model = auxlm::train_ngram({"a b c d", "d c b a"}, 3, 0.1);
  corpus::RequestTarget req{"r1", "u", "b c", std::string("a b")};

  SUBCASE("document equal to the concatenated few-shot set scores zero") {
    const std::vector<std::string> fewshot{"a b", "c"};
    const auto score = auxlm::benefit_score(model, req, doc("d1", "a b c"), fewshot, 0.3);
    CHECK(score.y == 0.0);
    CHECK(score.request_id == "r1");
    CHECK(score.doc_id == "d1");
  }
  SUBCASE("tiny hand-enumerable model matches the oracle") {
    const std::vector<std::string> train{"a b", "b a"};
    const auto tiny = auxlm::train_ngram(train, 2, 0.1);
    const std::vector<std::string> fewshot{"b b"};
    const auto got = auxlm::benefit_score(tiny, req, doc("d1", "a a"), fewshot, 0.5);
    const auto weights = auxlm::default_interpolation_weights(2);
    const double want =
        oracle_log_likelihood(train, 2, 0.1, weights, "a b", {"a a", "b c"}, 0.5) -
        oracle_log_likelihood(train, 2, 0.1, weights, "a b", {"b b", "b c"}, 0.5);
    CHECK(got.y == doctest::Approx(want).epsilon(1e-9));
  }
  SUBCASE("missing target text is an error") {
    corpus::RequestTarget live{"r2", "u", "b c", std::nullopt};
    CHECK_THROWS_AS(auxlm::benefit_score(model, live, doc("d1", "a"), {}, 0.3), ValidationError);
  }
}

TEST_CASE("query_likelihood ranks matching documents higher") {
  const auto model = auxlm::train_ngram({"x y z w", "p q r s"}, 3, 0.1);
  const double match = auxlm::query_likelihood(model, "x y", doc("d1", "x y z"), 0.3);
  const double mismatch = auxlm::query_likelihood(model, "x y", doc("d2", "p q r"), 0.3);
  CHECK(match > mismatch);

  SUBCASE("lambda zero collapses to the unconditional likelihood") {
    auxlm::ConditionalContext empty;
    empty.cache_weight = 0.0;
    CHECK(auxlm::query_likelihood(model, "x y", doc("d1", "p q"), 0.0) ==
          auxlm::log_likelihood(model, "x y", empty));
  }
  SUBCASE("repeated calls are identical") {
    CHECK(auxlm::query_likelihood(model, "x y", doc("d1", "x y z"), 0.3) == match);
  }
}

TEST_CASE("model serialization round trips exactly") {
  auto model = auxlm::train_ngram({"alpha beta gamma", "beta gamma delta"}, 3, 0.1);
  model.stamp = io::RunStamp{"deadbeef", 7};
  const auto path = (std::filesystem::temp_directory_path() / "auxlm_rt.model").string();
  model.save(path);
  const auto loaded = auxlm::NGramModel::load(path);

  CHECK(loaded.order() == model.order());
  CHECK(loaded.smoothing_k() == model.smoothing_k());
  CHECK(loaded.vocabulary() == model.vocabulary());
  CHECK(loaded.stamp.config_hash == "deadbeef");
  CHECK(loaded.stamp.seed == 7);

  // Byte-stable: saving the loaded model reproduces the file.
  const auto path2 = (std::filesystem::temp_directory_path() / "auxlm_rt2.model").string();
  loaded.save(path2);
  CHECK(io::read_file(path) == io::read_file(path2));

  // And likelihoods agree bit for bit.
  auxlm::ConditionalContext ctx{{"beta gamma"}, 0.3};
  CHECK(auxlm::log_likelihood(model, "alpha beta", ctx) ==
        auxlm::log_likelihood(loaded, "alpha beta", ctx));
}
