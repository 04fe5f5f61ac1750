#include "pearl/route.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pearl/error.hpp"

namespace pearl::route {

namespace {

constexpr double kGridPadding = 1e-9;

}  // namespace

double routed_metric(const std::vector<DevRecord>& records, double theta, RouteMetric metric) {
  if (records.empty()) throw std::invalid_argument("routed_metric: records must be non-empty");

  if (metric == RouteMetric::Rouge2) {
    double sum = 0.0;
    for (const auto& rec : records) {
      const auto& chosen = rec.s1 < theta ? rec.revised_text : rec.stage1_text;
      sum += eval::rouge_n(chosen, rec.reference, 2).f1;
    }
    return sum / static_cast<double>(records.size());
  }

  std::vector<eval::StanceLabel> predicted;
  std::vector<eval::StanceLabel> gold;
  for (const auto& rec : records) {
    const auto ref_label = eval::stance_label(rec.reference);
    if (ref_label == eval::StanceLabel::UNK) continue;  // unlabeled reference
    const auto& chosen = rec.s1 < theta ? rec.revised_text : rec.stage1_text;
    predicted.push_back(eval::stance_label(chosen));
    gold.push_back(ref_label);
  }
  if (gold.empty()) {
    throw ValidationError("routed_metric: no reference carries a stance label");
  }
  return eval::macro_f1(predicted, gold);
}

Threshold learn_threshold(const std::vector<DevRecord>& dev_records, RouteMetric metric) {
  if (dev_records.empty()) {
    throw std::invalid_argument("learn_threshold: dev set must be non-empty");
  }

  std::set<double> unique_s1;
  for (const auto& rec : dev_records) unique_s1.insert(rec.s1);
  std::vector<double> grid(unique_s1.begin(), unique_s1.end());
  grid.insert(grid.begin(), *unique_s1.begin() - kGridPadding);
  grid.push_back(*unique_s1.rbegin() + kGridPadding);

  Threshold best;
  bool first = true;
  for (const double theta : grid) {
    const double value = routed_metric(dev_records, theta, metric);
    // Strict improvement required, so ties keep the smallest theta and with
    // it the fewest revisions.
    if (first || value > best.dev_metric_at_theta) {
      best.theta = theta;
      best.dev_metric_at_theta = value;
      first = false;
    }
  }

  std::size_t revised = 0;
  for (const auto& rec : dev_records) {
    if (rec.s1 < best.theta) ++revised;
  }
  best.revised_fraction = static_cast<double>(revised) / static_cast<double>(dev_records.size());
  return best;
}

ReviseResult selective_revise(const retriever::CrossScorer& scorer, genpipe::Backend& backend,
                              const Threshold& threshold,
                              const std::vector<corpus::RequestTarget>& requests,
                              const std::vector<corpus::UserHistory>& histories, int k,
                              const ReviseOptions& options) {
  if (k < 1) throw std::invalid_argument("selective_revise: k must be >= 1");

  ReviseResult result;
  std::size_t revised_count = 0;
  for (const auto& req : requests) {
    const corpus::UserHistory* user = nullptr;
    for (const auto& h : histories) {
      if (h.user_id == req.user_id) {
        user = &h;
        break;
      }
    }
    if (user == nullptr || user->documents.empty()) {
      throw ValidationError("selective_revise: no documents for user '" + req.user_id + "'");
    }

    const auto ranked = retriever::rank(scorer, req.request_text, user->documents);
    const double s1 = ranked.front().score;

    std::vector<corpus::Document> top;
    for (const auto& sd : ranked) {
      if (top.size() >= static_cast<std::size_t>(k)) break;
      for (const auto& doc : user->documents) {
        if (doc.doc_id == sd.doc_id) {
          top.push_back(doc);
          break;
        }
      }
    }

    RoutingDecision decision;
    decision.request_id = req.request_id;
    decision.s1 = s1;
    decision.revised = s1 < threshold.theta;
    if (decision.revised) ++revised_count;
    try {
      const auto prompt = genpipe::build_prompt(options.generation_template, req.request_text, top);
      const auto draft =
          genpipe::generate(backend, prompt, options.temperature, options.max_words);
      if (decision.revised) {
        const auto revision_prompt =
            genpipe::build_revision_prompt(options.revision_template, req.request_text, draft, top);
        const auto reply =
            genpipe::generate(backend, revision_prompt, options.temperature, options.max_words);
        decision.final_text = genpipe::parse_revision_reply(reply).text;
      } else {
        decision.final_text = draft;
      }
    } catch (const BackendError&) {
      decision.failed = true;
    }
    result.decisions.push_back(std::move(decision));
  }

  result.revised_fraction =
      requests.empty() ? 0.0
                       : static_cast<double>(revised_count) / static_cast<double>(requests.size());
  return result;
}

}  // namespace pearl::route
