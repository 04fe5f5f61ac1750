#include <doctest.h>

#include <filesystem>
#include <set>

#include "pearl/error.hpp"
#include "pearl/trainsel.hpp"

using namespace pearl;

namespace {

corpus::Document doc(const std::string& id, const std::string& user, const std::string& text) {
  return corpus::Document{id, user, text, std::nullopt};
}

std::vector<corpus::UserHistory> one_user_five_docs() {
  return {{"u1",
           {doc("d1", "u1", "alpha beta gamma"), doc("d2", "u1", "beta gamma delta"),
            doc("d3", "u1", "gamma delta epsilon"), doc("d4", "u1", "delta epsilon zeta"),
            doc("d5", "u1", "epsilon zeta eta")}}};
}

corpus::RequestTarget request(const std::string& id, const std::string& user,
                              const std::string& text) {
  return corpus::RequestTarget{id, user, text, std::string("alpha beta target text")};
}

auxlm::BenefitScore score(const std::string& rid, const std::string& did, double y) {
  return auxlm::BenefitScore{rid, did, y};
}

}  // namespace

TEST_CASE("score_all_pairs covers every in-user pair and nothing else") {
  const auto model = auxlm::train_ngram({"alpha beta", "gamma delta"}, 2, 0.1);
  const auto candidates = one_user_five_docs();
  const std::vector<corpus::RequestTarget> requests{request("r1", "u1", "alpha"),
                                                    request("r2", "u1", "beta")};
  const auto scores = trainsel::score_all_pairs(model, candidates, requests, {"few shot"}, 0.3);
  REQUIRE(scores.size() == 10);

  // Order: requests outer, documents inner.
  CHECK(scores[0].request_id == "r1");
  CHECK(scores[0].doc_id == "d1");
  CHECK(scores[5].request_id == "r2");

  SUBCASE("pairs match direct benefit_score calls exactly") {
    const auto direct = auxlm::benefit_score(model, requests[0], candidates[0].documents[2],
                                             {"few shot"}, 0.3);
    CHECK(scores[2].y == direct.y);
  }
  SUBCASE("two users never share pairs") {
    auto two_users = candidates;
    two_users.push_back({"u2", {doc("x1", "u2", "omega psi chi")}});
    auto reqs = requests;
    reqs.push_back(request("r3", "u2", "omega"));
    const auto all = trainsel::score_all_pairs(model, two_users, reqs, {}, 0.3);
    CHECK(all.size() == 11);
    for (const auto& s : all) {
      if (s.request_id == "r3") {
        CHECK(s.doc_id == "x1");
      } else {
        CHECK(s.doc_id != "x1");
      }
    }
  }
  SUBCASE("request with an unknown user names the request") {
    const std::vector<corpus::RequestTarget> bad{request("r9", "nobody", "text")};
    CHECK_THROWS_WITH_AS(trainsel::score_all_pairs(model, candidates, bad, {}, 0.3),
                         doctest::Contains("r9"), ValidationError);
  }
}

TEST_CASE("select_requests keeps the top fraction by best score") {
  std::vector<corpus::RequestTarget> requests;
  std::vector<auxlm::BenefitScore> scores;
  for (int i = 0; i < 9; ++i) {
    const auto id = "r" + std::to_string(i);
    requests.push_back(request(id, "u1", "text " + std::to_string(i)));
    scores.push_back(score(id, "dA", static_cast<double>(i)));
    scores.push_back(score(id, "dB", static_cast<double>(i) - 5.0));  // max wins
  }

  SUBCASE("9 requests at two-thirds keeps 6") {
    const auto kept = trainsel::select_requests(scores, requests, 2.0 / 3.0);
    REQUIRE(kept.size() == 6);
    CHECK(kept.front().request_id == "r8");  // highest max score first
    std::set<std::string> ids;
    for (const auto& r : kept) ids.insert(r.request_id);
    CHECK_FALSE(ids.contains("r0"));
    CHECK_FALSE(ids.contains("r1"));
    CHECK_FALSE(ids.contains("r2"));
  }
  SUBCASE("fraction 1.0 keeps everything") {
    CHECK(trainsel::select_requests(scores, requests, 1.0).size() == 9);
  }
  SUBCASE("ties break by request_id ascending") {
    std::vector<auxlm::BenefitScore> tied;
    for (const auto& r : requests) tied.push_back(score(r.request_id, "dA", 1.0));
    const auto kept = trainsel::select_requests(tied, requests, 2.0 / 3.0);
    REQUIRE(kept.size() == 6);
    CHECK(kept[0].request_id == "r0");
    CHECK(kept[5].request_id == "r5");
  }
  SUBCASE("raising a dropped request's best score keeps it selected") {
    auto boosted = scores;
    boosted.push_back(score("r0", "dC", 100.0));
    const auto kept = trainsel::select_requests(boosted, requests, 2.0 / 3.0);
    bool found = false;
    for (const auto& r : kept) found = found || r.request_id == "r0";
    CHECK(found);
  }
  SUBCASE("a request without scores is an error") {
    auto extra = requests;
    extra.push_back(request("r99", "u1", "text"));
    CHECK_THROWS_WITH_AS(trainsel::select_requests(scores, extra, 0.5),
                         doctest::Contains("r99"), ValidationError);
  }
}

TEST_CASE("build_groups assembles positives and seeded negatives") {
  const auto candidates = one_user_five_docs();
  const std::vector<corpus::RequestTarget> selected{request("r1", "u1", "alpha beta")};
  std::vector<auxlm::BenefitScore> scores;
  const std::vector<double> ys{5.0, 4.0, 1.0, 2.0, 3.0};  // d1, d2 are positives at p=2
  for (int i = 0; i < 5; ++i) {
    scores.push_back(score("r1", "d" + std::to_string(i + 1), ys[static_cast<std::size_t>(i)]));
  }
  trainsel::SelectionConfig cfg;
  cfg.positives_per_request = 2;
  cfg.negatives_per_positive = 3;
  cfg.seed = 17;

  const auto built = trainsel::build_groups(scores, selected, candidates, cfg);
  CHECK(built.skipped == 0);
  REQUIRE(built.groups.size() == 2);

  const std::set<std::string> expected_negative_pool{"d3", "d4", "d5"};
  for (const auto& g : built.groups) {
    CHECK((g.positive.doc_id == "d1" || g.positive.doc_id == "d2"));
    CHECK(g.request_text == "alpha beta");
    REQUIRE(g.negatives.size() == 3);  // exactly the three non-positive docs
    std::set<std::string> negs;
    for (const auto& n : g.negatives) {
      negs.insert(n.doc_id);
      CHECK(n.doc_id != g.positive.doc_id);
    }
    CHECK(negs == expected_negative_pool);
  }
  CHECK(built.groups[0].positive.doc_id == "d1");
  CHECK(built.groups[0].positive.y == 5.0);

  SUBCASE("byte-identical output for equal seeds") {
    const auto again = trainsel::build_groups(scores, selected, candidates, cfg);
    const auto p1 = (std::filesystem::temp_directory_path() / "groups_a.jsonl").string();
    const auto p2 = (std::filesystem::temp_directory_path() / "groups_b.jsonl").string();
    trainsel::save_groups(built.groups, p1, io::RunStamp{"h", 1});
    trainsel::save_groups(again.groups, p2, io::RunStamp{"h", 1});
    CHECK(io::read_file(p1) == io::read_file(p2));
  }
  SUBCASE("load_groups round trips") {
    const auto path = (std::filesystem::temp_directory_path() / "groups_rt.jsonl").string();
    trainsel::save_groups(built.groups, path, io::RunStamp{"h", 1});
    CHECK(trainsel::load_groups(path) == built.groups);
  }
}

TEST_CASE("build_groups skips groups with no available negatives") {
  const std::vector<corpus::UserHistory> tiny{
      {"u1", {doc("d1", "u1", "alpha beta"), doc("d2", "u1", "gamma delta")}}};
  const std::vector<corpus::RequestTarget> selected{request("r1", "u1", "alpha")};
  const std::vector<auxlm::BenefitScore> scores{score("r1", "d1", 2.0), score("r1", "d2", 1.0)};

  trainsel::SelectionConfig cfg;
  cfg.positives_per_request = 2;  // both docs become positives, pool empty
  cfg.negatives_per_positive = 3;
  const auto built = trainsel::build_groups(scores, selected, tiny, cfg);
  CHECK(built.groups.empty());
  CHECK(built.skipped == 2);
}

TEST_CASE("build_groups uses all negatives when fewer than n remain") {
  const std::vector<corpus::UserHistory> three{
      {"u1",
       {doc("d1", "u1", "alpha beta"), doc("d2", "u1", "gamma delta"),
        doc("d3", "u1", "epsilon zeta")}}};
  const std::vector<corpus::RequestTarget> selected{request("r1", "u1", "alpha")};
  const std::vector<auxlm::BenefitScore> scores{score("r1", "d1", 2.0), score("r1", "d2", 1.0),
                                                score("r1", "d3", 0.0)};
  trainsel::SelectionConfig cfg;
  cfg.positives_per_request = 1;
  cfg.negatives_per_positive = 5;
  const auto built = trainsel::build_groups(scores, selected, three, cfg);
  REQUIRE(built.groups.size() == 1);
  CHECK(built.groups[0].negatives.size() == 2);
  CHECK(built.skipped == 0);
}

TEST_CASE("group counting identity holds") {
  const auto candidates = one_user_five_docs();
  std::vector<corpus::RequestTarget> selected;
  std::vector<auxlm::BenefitScore> scores;
  for (int r = 0; r < 3; ++r) {
    const auto id = "r" + std::to_string(r);
    selected.push_back(request(id, "u1", "text"));
    for (int i = 0; i < 5; ++i) {
      scores.push_back(score(id, "d" + std::to_string(i + 1), static_cast<double>(i + r)));
    }
  }
  trainsel::SelectionConfig cfg;
  cfg.positives_per_request = 2;
  cfg.negatives_per_positive = 3;
  const auto built = trainsel::build_groups(scores, selected, candidates, cfg);
  CHECK(built.groups.size() + built.skipped == 2 * selected.size());
}
