#include "pearl/trainsel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "pearl/error.hpp"
#include "pearl/rng.hpp"
#include "pearl/text.hpp"

namespace pearl::trainsel {

using nlohmann::json;

namespace {

std::size_t ceil_fraction(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

const corpus::UserHistory* find_user(const std::vector<corpus::UserHistory>& histories,
                                     const std::string& user_id) {
  for (const auto& h : histories) {
    if (h.user_id == user_id) return &h;
  }
  return nullptr;
}

}  // namespace

std::vector<auxlm::BenefitScore> score_all_pairs(
    const auxlm::NGramModel& model, const std::vector<corpus::UserHistory>& candidates,
    const std::vector<corpus::RequestTarget>& requests, const std::vector<std::string>& fewshot,
    double cache_weight) {
  std::vector<auxlm::BenefitScore> scores;
  for (const auto& req : requests) {
    const auto* user = find_user(candidates, req.user_id);
    if (user == nullptr || user->documents.empty()) {
      throw ValidationError("score_all_pairs: request '" + req.request_id +
                            "' has no candidate documents for user '" + req.user_id + "'");
    }
    for (const auto& doc : user->documents) {
      scores.push_back(auxlm::benefit_score(model, req, doc, fewshot, cache_weight));
    }
  }
  return scores;
}

std::vector<corpus::RequestTarget> select_requests(
    const std::vector<auxlm::BenefitScore>& scores,
    const std::vector<corpus::RequestTarget>& requests, double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw std::invalid_argument("select_requests: top_fraction must be in (0,1]");
  }
  std::unordered_map<std::string, double> best;
  for (const auto& s : scores) {
    const auto it = best.find(s.request_id);
    if (it == best.end() || s.y > it->second) best[s.request_id] = s.y;
  }

  std::vector<const corpus::RequestTarget*> order;
  order.reserve(requests.size());
  for (const auto& req : requests) {
    if (!best.contains(req.request_id)) {
      throw ValidationError("select_requests: request '" + req.request_id + "' has no scores");
    }
    order.push_back(&req);
  }
  std::sort(order.begin(), order.end(),
            [&best](const corpus::RequestTarget* a, const corpus::RequestTarget* b) {
              const double ya = best.at(a->request_id);
              const double yb = best.at(b->request_id);
              if (ya != yb) return ya > yb;
              return a->request_id < b->request_id;
            });

  const std::size_t keep = ceil_fraction(top_fraction, order.size());
  std::vector<corpus::RequestTarget> selected;
  selected.reserve(keep);
  for (std::size_t i = 0; i < keep && i < order.size(); ++i) selected.push_back(*order[i]);
  return selected;
}

GroupBuildResult build_groups(const std::vector<auxlm::BenefitScore>& scores,
                              const std::vector<corpus::RequestTarget>& selected,
                              const std::vector<corpus::UserHistory>& candidates,
                              const SelectionConfig& config) {
  if (config.positives_per_request < 1 || config.negatives_per_positive < 1) {
    throw std::invalid_argument("build_groups: p and n must be >= 1");
  }
  const auto p = static_cast<std::size_t>(config.positives_per_request);
  const auto n = static_cast<std::size_t>(config.negatives_per_positive);

  // (request_id, doc_id) -> y from the scoring pass; scores are reused for
  // positives and negatives alike.
  std::map<std::pair<std::string, std::string>, double> y_of;
  for (const auto& s : scores) y_of[{s.request_id, s.doc_id}] = s.y;

  GroupBuildResult result;
  for (const auto& req : selected) {
    // The retriever never sees target texts; groups carry only request text,
    // documents, and their scores.
    const auto* user = find_user(candidates, req.user_id);
    if (user == nullptr) {
      throw ValidationError("build_groups: no candidate history for user '" + req.user_id + "'");
    }
    const auto& docs = user->documents;

    std::vector<double> y_doc(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const auto it = y_of.find({req.request_id, docs[i].doc_id});
      if (it == y_of.end()) {
        throw ValidationError("build_groups: missing score for request '" + req.request_id +
                              "', doc '" + docs[i].doc_id + "'");
      }
      y_doc[i] = it->second;
    }
    std::vector<std::size_t> by_y(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) by_y[i] = i;
    std::sort(by_y.begin(), by_y.end(), [&](std::size_t a, std::size_t b) {
      if (y_doc[a] != y_doc[b]) return y_doc[a] > y_doc[b];
      return docs[a].doc_id < docs[b].doc_id;
    });

    // A user with fewer than p+1 documents yields capped positives and, when
    // the pool is empty, skipped groups rather than a hard failure.
    const auto n_pos = std::min(p, docs.size());
    std::vector<std::size_t> positives(by_y.begin(),
                                       by_y.begin() + static_cast<std::ptrdiff_t>(n_pos));
    std::vector<std::size_t> pool(by_y.begin() + static_cast<std::ptrdiff_t>(n_pos), by_y.end());
    std::sort(pool.begin(), pool.end());  // restore document order for sampling

    for (std::size_t pi = 0; pi < positives.size(); ++pi) {
      const auto& pos_doc = docs[positives[pi]];
      if (pool.empty()) {
        ++result.skipped;
        continue;
      }
      SplitMix64 rng(sub_seed(config.seed, "neg:" + req.request_id + ":" + pos_doc.doc_id));
      const auto picks = rng.sample_indices(pool.size(), n);

      TrainingGroup group;
      group.request_id = req.request_id;
      group.request_text = req.request_text;
      group.positive = GroupDoc{pos_doc.doc_id, pos_doc.text, y_doc[positives[pi]]};
      for (const auto pick : picks) {
        const auto& neg_doc = docs[pool[pick]];
        group.negatives.push_back(GroupDoc{neg_doc.doc_id, neg_doc.text, y_doc[pool[pick]]});
      }
      result.groups.push_back(std::move(group));
    }
  }
  return result;
}

void save_groups(const std::vector<TrainingGroup>& groups, const std::string& path,
                 const io::RunStamp& stamp) {
  std::string out;
  {
    json header;
    header["kind"] = "trainset";
    header["config_hash"] = stamp.config_hash;
    header["seed"] = stamp.seed;
    out += header.dump();
    out += '\n';
  }
  for (const auto& g : groups) {
    json j;
    j["request_id"] = g.request_id;
    j["request_text"] = g.request_text;
    j["positive"] = {{"doc_id", g.positive.doc_id}, {"text", g.positive.text}, {"y", g.positive.y}};
    json negs = json::array();
    for (const auto& neg : g.negatives) {
      negs.push_back({{"doc_id", neg.doc_id}, {"text", neg.text}, {"y", neg.y}});
    }
    j["negatives"] = negs;
    out += j.dump();
    out += '\n';
  }
  io::atomic_write(path, out);
}

std::vector<TrainingGroup> load_groups(const std::string& path) {
  const auto lines = io::read_lines(path);
  std::vector<TrainingGroup> groups;
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ParseError(path + " line " + std::to_string(lineno) + ": malformed JSON object");
    }
    if (j.contains("kind")) continue;  // provenance header
    try {
      TrainingGroup g;
      g.request_id = j.at("request_id").get<std::string>();
      g.request_text = j.at("request_text").get<std::string>();
      const auto& pos = j.at("positive");
      g.positive = GroupDoc{pos.at("doc_id").get<std::string>(), pos.at("text").get<std::string>(),
                            pos.at("y").get<double>()};
      for (const auto& neg : j.at("negatives")) {
        g.negatives.push_back(GroupDoc{neg.at("doc_id").get<std::string>(),
                                       neg.at("text").get<std::string>(),
                                       neg.at("y").get<double>()});
      }
      groups.push_back(std::move(g));
    } catch (const json::exception& e) {
      throw ParseError(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return groups;
}

}  // namespace pearl::trainsel
