#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <vector>

#include "pearl/retriever.hpp"
#include "pearl/rng.hpp"

using namespace pearl;
using retriever::CrossScorer;
using retriever::TrainConfig;

namespace {

corpus::Document doc(const std::string& id, const std::string& text) {
  return corpus::Document{id, "u", text, std::nullopt};
}

// One well-separated group: distinct feature vectors and spread-out targets.
trainsel::TrainingGroup example_group() {
  trainsel::TrainingGroup g;
  g.request_id = "r1";
  g.request_text = "alpha bravo charlie delta";
  g.positive = {"p", "alpha bravo charlie delta echo", 2.0};
  g.negatives = {
      {"n1", "alpha bravo zulu", 0.5},
      {"n2", "alpha yankee xray whiskey", -0.5},
      {"n3", "quebec romeo sierra tango", -1.5},
  };
  return g;
}

// Straight-line reimplementation of the anchored objective for the oracle
// comparison; no shared code with the production path.
double oracle_loss(const std::vector<double>& s, const std::vector<double>& y, double y0,
                   double tau) {
  std::vector<double> ye{y0};
  for (double v : y) ye.push_back(v);
  std::vector<double> se{0.0};
  for (double v : s) se.push_back(v);

  double zy = 0.0;
  double zs = 0.0;
  for (double v : ye) zy += std::exp(v / tau);
  for (double v : se) zs += std::exp(v);
  double out = 0.0;
  for (std::size_t i = 0; i < ye.size(); ++i) {
    out -= std::exp(ye[i] / tau) / zy * std::log(std::exp(se[i]) / zs);
  }
  return out;
}

std::vector<double> fd_gradient(const std::vector<double>& s, const std::vector<double>& y,
                                double y0, double tau, double h) {
  std::vector<double> grad(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto hi = s;
    auto lo = s;
    hi[i] += h;
    lo[i] -= h;
    grad[i] = (retriever::loss(hi, y, y0, tau) - retriever::loss(lo, y, y0, tau)) / (2.0 * h);
  }
  return grad;
}

}  // namespace

TEST_CASE("anchored loss: symmetric two-way softmax gives log 2") {
  const std::vector<double> y{3.7};
  const std::vector<double> s{0.0};
  CHECK(retriever::loss(s, y, 3.7, 5.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("anchored loss matches a straight-line oracle") {
  const std::vector<double> y{2.0, 0.0, 0.0, 0.0};
  const std::vector<double> s{0.0, 0.0, 0.0, 0.0};
  CHECK(retriever::loss(s, y, 1.0, 5.0) ==
        doctest::Approx(oracle_loss(s, y, 1.0, 5.0)).epsilon(1e-12));
}

TEST_CASE("the analytic minimizer is (y_i - y0) / tau") {
  const std::vector<double> y{2.0, -1.0, 0.5};
  const double y0 = 0.4;
  const double tau = 5.0;
  std::vector<double> star(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) star[i] = (y[i] - y0) / tau;

  const double at_star = retriever::loss(star, y, y0, tau);
  for (const auto& grad_component : retriever::loss_gradient(star, y, y0, tau)) {
    CHECK(std::abs(grad_component) < 1e-12);
  }
  SplitMix64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto perturbed = star;
    for (auto& v : perturbed) v += rng.next_in(-0.5, 0.5);
    CHECK(retriever::loss(perturbed, y, y0, tau) >= at_star);
  }
}

TEST_CASE("gradient components satisfy the simplex identity") {
  const std::vector<double> y{1.0, 0.2, -0.7};
  const std::vector<double> s{0.3, -0.1, 0.9};
  const double y0 = 0.5;
  const double tau = 5.0;
  const auto grad = retriever::loss_gradient(s, y, y0, tau);

  double zs = std::exp(0.0);
  for (double v : s) zs += std::exp(v);
  double zy = std::exp(y0 / tau);
  for (double v : y) zy += std::exp(v / tau);
  const double q0 = std::exp(0.0) / zs;
  const double p0 = std::exp(y0 / tau) / zy;

  double sum = 0.0;
  for (double g : grad) sum += g;
  CHECK(sum == doctest::Approx((1.0 - q0) - (1.0 - p0)).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central finite differences") {
  SplitMix64 rng(11);
  for (const double tau : {1.0, 5.0, 10.0}) {
    for (int trial = 0; trial < 8; ++trial) {
      const std::size_t n = 1 + rng.next_below(5);
      std::vector<double> y(n + 1);
      std::vector<double> s(n + 1);
      for (auto& v : y) v = rng.next_in(-3.0, 3.0);
      for (auto& v : s) v = rng.next_in(-2.0, 2.0);
      const double y0 = rng.next_in(-2.0, 2.0);

      const auto analytic = retriever::loss_gradient(s, y, y0, tau);
      const auto numeric = fd_gradient(s, y, y0, tau, 1e-5);
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double rel =
            std::abs(analytic[i] - numeric[i]) / std::max(std::abs(numeric[i]), 1e-6);
        CHECK(rel <= 1e-4);
      }
    }
  }
}

TEST_CASE("standard KL variant drops the anchor") {
  const std::vector<double> y{1.0, -1.0};
  const std::vector<double> s{0.2, -0.2};
  // Matching softmaxes minimize it: s = y / tau up to a constant shift.
  std::vector<double> matched{(y[0] - y[1]) / 5.0 / 2.0, -(y[0] - y[1]) / 5.0 / 2.0};
  CHECK(retriever::standard_kl_loss(matched, y, 5.0) <= retriever::standard_kl_loss(s, y, 5.0));
  const auto grad = retriever::standard_kl_gradient(matched, y, 5.0);
  for (double g : grad) CHECK(std::abs(g) < 1e-12);
}

TEST_CASE("loss rejects non-finite and malformed input") {
  const std::vector<double> y{1.0};
  const std::vector<double> nan_scores{std::nan("")};
  const std::vector<double> two_scores{0.0, 1.0};
  const std::vector<double> one_score{0.0};
  const std::vector<double> inf_targets{std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(retriever::loss(nan_scores, y, 0.0, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(retriever::loss(two_scores, y, 0.0, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(retriever::loss(one_score, y, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(retriever::loss_gradient(one_score, inf_targets, 0.0, 5.0),
                  std::invalid_argument);
}

TEST_CASE("training is deterministic and serialization round trips") {
  TrainConfig cfg;
  cfg.anchor_from_median = false;
  cfg.anchor_y0 = 0.25;
  cfg.epochs = 50;
  cfg.learning_rate = 0.1;
  cfg.seed = 13;

  const std::vector<trainsel::TrainingGroup> groups{example_group()};
  const auto a = retriever::train(groups, cfg);
  const auto b = retriever::train(groups, cfg);

  std::ostringstream sa;
  std::ostringstream sb;
  a.scorer.write(sa);
  b.scorer.write(sb);
  CHECK(sa.str() == sb.str());
  CHECK(a.final_loss == b.final_loss);

  const auto path = (std::filesystem::temp_directory_path() / "scorer_rt.model").string();
  a.scorer.save(path);
  const auto loaded = CrossScorer::load(path);
  const auto path2 = (std::filesystem::temp_directory_path() / "scorer_rt2.model").string();
  loaded.save(path2);
  CHECK(io::read_file(path) == io::read_file(path2));

  const auto x = retriever::encode_pair_text("alpha bravo", "alpha bravo zulu", a.scorer.train_stats);
  CHECK(a.scorer.score(x) == loaded.score(x));
}

TEST_CASE("a single group converges to the anchored targets") {
  TrainConfig cfg;
  cfg.anchor_from_median = false;
  cfg.anchor_y0 = 0.25;
  cfg.epochs = 6000;
  cfg.learning_rate = 0.3;
  cfg.seed = 1;

  const auto group = example_group();
  const auto result = retriever::train({group}, cfg);

  std::vector<trainsel::GroupDoc> docs{group.positive};
  docs.insert(docs.end(), group.negatives.begin(), group.negatives.end());
  for (const auto& gd : docs) {
    const auto x =
        retriever::encode_pair_text(group.request_text, gd.text, result.scorer.train_stats);
    const double want = (gd.y - cfg.anchor_y0) / cfg.tau;
    CHECK(result.scorer.score(x) == doctest::Approx(want).scale(1.0).epsilon(0.01));
  }
}

TEST_CASE("training reports divergence with the epoch") {
  TrainConfig cfg;
  cfg.anchor_from_median = false;
  cfg.anchor_y0 = 0.0;
  cfg.epochs = 5000;
  cfg.learning_rate = 1e9;  // guaranteed blow-up
  cfg.seed = 1;
  CHECK_THROWS_WITH_AS(retriever::train({example_group()}, cfg), doctest::Contains("epoch"),
                       std::runtime_error);
}

TEST_CASE("train rejects an empty group list") {
  CHECK_THROWS_AS(retriever::train({}, TrainConfig{}), std::invalid_argument);
}

TEST_CASE("rank orders by score with doc_id tie-breaks") {
  CrossScorer zero;
  zero.weights_in.assign(static_cast<std::size_t>(retriever::kFeatureCount) *
                             retriever::kHiddenUnits,
                         0.0);
  zero.bias.assign(retriever::kHiddenUnits, 0.0);
  zero.weights_out.assign(retriever::kHiddenUnits, 0.0);

  const std::vector<corpus::Document> docs{doc("b", "one two"), doc("a", "three four"),
                                           doc("c", "five six")};
  const auto ranked = retriever::rank(zero, "one two", docs);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].doc_id == "a");  // all scores zero: doc_id ascending
  CHECK(ranked[1].doc_id == "b");
  CHECK(ranked[2].doc_id == "c");

  CHECK_THROWS_AS(retriever::rank(zero, "q", {}), std::invalid_argument);
  CHECK(retriever::top1_score(zero, "one two", docs) == ranked[0].score);
}

TEST_CASE("rank is invariant to input permutation") {
  TrainConfig cfg;
  cfg.anchor_from_median = false;
  cfg.epochs = 200;
  cfg.seed = 3;
  const auto scorer = retriever::train({example_group()}, cfg).scorer;

  std::vector<corpus::Document> docs{doc("d1", "alpha bravo charlie"), doc("d2", "alpha zulu"),
                                     doc("d3", "quebec romeo")};
  const auto base = retriever::rank(scorer, "alpha bravo charlie", docs);
  std::swap(docs[0], docs[2]);
  const auto swapped = retriever::rank(scorer, "alpha bravo charlie", docs);
  CHECK(base == swapped);

  SUBCASE("single document ranks first") {
    const auto one = retriever::rank(scorer, "alpha", {doc("only", "alpha beta")});
    REQUIRE(one.size() == 1);
    CHECK(one[0].doc_id == "only");
  }
}

TEST_CASE("anchor pins the scale: shifting targets and anchor together is a no-op") {
  TrainConfig cfg;
  cfg.anchor_from_median = false;
  cfg.anchor_y0 = 0.25;
  cfg.epochs = 2000;
  cfg.learning_rate = 0.3;
  cfg.seed = 5;

  auto group = example_group();
  const auto base = retriever::train({group}, cfg);

  const double c = 10.0;
  auto shifted_cfg = cfg;
  shifted_cfg.anchor_y0 += c;
  auto shifted_group = group;
  shifted_group.positive.y += c;
  for (auto& neg : shifted_group.negatives) neg.y += c;
  const auto shifted = retriever::train({shifted_group}, shifted_cfg);

  std::vector<trainsel::GroupDoc> docs{group.positive};
  docs.insert(docs.end(), group.negatives.begin(), group.negatives.end());
  for (const auto& gd : docs) {
    const auto x = retriever::encode_pair_text(group.request_text, gd.text, base.scorer.train_stats);
    CHECK(base.scorer.score(x) ==
          doctest::Approx(shifted.scorer.score(x)).scale(1.0).epsilon(1e-3));
  }
}
