#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pearl/auxlm.hpp"
#include "pearl/corpus.hpp"
#include "pearl/io.hpp"

namespace pearl::trainsel {

struct GroupDoc {
  std::string doc_id;
  std::string text;
  double y = 0.0;  // benefit score of this document for the group's request
  bool operator==(const GroupDoc&) const = default;
};

// One request with one positive and up to n negative candidate documents;
// the unit the listwise loss consumes. Target texts are never stored here.
struct TrainingGroup {
  std::string request_id;
  std::string request_text;
  GroupDoc positive;
  std::vector<GroupDoc> negatives;
  bool operator==(const TrainingGroup&) const = default;
};

struct SelectionConfig {
  double top_fraction = 2.0 / 3.0;  // fraction of requests kept
  int positives_per_request = 2;    // p
  int negatives_per_positive = 3;   // n
  std::uint64_t seed = 0;
};

// Scores every (request, candidate document) pair within each user; pairs
// never cross users. Throws ValidationError naming the request when its user
// has no candidate history.
std::vector<auxlm::BenefitScore> score_all_pairs(
    const auxlm::NGramModel& model, const std::vector<corpus::UserHistory>& candidates,
    const std::vector<corpus::RequestTarget>& requests, const std::vector<std::string>& fewshot,
    double cache_weight = 0.3);

// Assigns each request the maximum benefit score over its candidate
// documents, sorts descending (ties by request_id ascending), and keeps the
// top ceil(top_fraction * count).
std::vector<corpus::RequestTarget> select_requests(
    const std::vector<auxlm::BenefitScore>& scores,
    const std::vector<corpus::RequestTarget>& requests, double top_fraction);

struct GroupBuildResult {
  std::vector<TrainingGroup> groups;
  std::size_t skipped = 0;  // groups dropped because no negative was available
};

// Per selected request, the p highest-scoring documents become positives
// (one group per positive). Negatives are drawn uniformly without
// replacement from the user's candidate documents excluding all p positives;
// when fewer than n remain, all are used, and a group with no available
// negative is skipped and counted.
GroupBuildResult build_groups(const std::vector<auxlm::BenefitScore>& scores,
                              const std::vector<corpus::RequestTarget>& selected,
                              const std::vector<corpus::UserHistory>& candidates,
                              const SelectionConfig& config);

void save_groups(const std::vector<TrainingGroup>& groups, const std::string& path,
                 const io::RunStamp& stamp);
std::vector<TrainingGroup> load_groups(const std::string& path);

}  // namespace pearl::trainsel
