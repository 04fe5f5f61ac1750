#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace pearl {

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;
  bool operator==(const ScoredDoc&) const = default;
};

// Descending by score, ties broken by doc_id ascending.
inline void sort_ranked(std::vector<ScoredDoc>& ranked) {
  std::stable_sort(ranked.begin(), ranked.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
}

}  // namespace pearl
