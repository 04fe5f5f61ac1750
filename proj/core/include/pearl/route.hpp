#pragma once

#include <string>
#include <vector>

#include "pearl/corpus.hpp"
#include "pearl/eval.hpp"
#include "pearl/genpipe.hpp"
#include "pearl/retriever.hpp"

namespace pearl::route {

enum class RouteMetric { Rouge2, MacroF1 };

// One development instance with both outcomes precomputed, so the threshold
// search makes no backend calls.
struct DevRecord {
  double s1 = 0.0;
  std::string stage1_text;
  std::string revised_text;
  std::string reference;
};

struct Threshold {
  double theta = 0.0;
  double dev_metric_at_theta = 0.0;
  double revised_fraction = 0.0;  // on the development set
};

// Corpus-level metric of choosing revised_text where s1 < theta and
// stage1_text otherwise. Rouge2 averages per-instance F1; MacroF1 is computed
// corpus-level over stance labels, skipping instances whose reference has no
// stance label.
double routed_metric(const std::vector<DevRecord>& records, double theta, RouteMetric metric);

// Grid search over the unique dev s1 values plus (min - eps) and (max + eps);
// the metric-maximizing theta wins, ties going to the smallest theta (fewest
// revisions).
Threshold learn_threshold(const std::vector<DevRecord>& dev_records, RouteMetric metric);

struct RoutingDecision {
  std::string request_id;
  double s1 = 0.0;
  bool revised = false;
  std::string final_text;
  bool failed = false;  // backend failure; pipeline continued
};

struct ReviseOptions {
  genpipe::PromptTemplate generation_template = genpipe::PromptTemplate::generation_default();
  genpipe::PromptTemplate revision_template = genpipe::PromptTemplate::revision_default();
  double temperature = 0.0;
  std::size_t max_words = 300;
};

struct ReviseResult {
  std::vector<RoutingDecision> decisions;  // in request order
  double revised_fraction = 0.0;
};

// Live selective revision: per request, rank the user's documents, generate a
// stage-1 draft, and when the top-1 score falls below the threshold run one
// revision pass and keep the text after the revision marker. Backend
// failures mark the decision failed and the pipeline continues.
ReviseResult selective_revise(const retriever::CrossScorer& scorer, genpipe::Backend& backend,
                              const Threshold& threshold,
                              const std::vector<corpus::RequestTarget>& requests,
                              const std::vector<corpus::UserHistory>& histories, int k,
                              const ReviseOptions& options = {});

}  // namespace pearl::route
