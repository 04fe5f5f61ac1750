#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pearl/auxlm.hpp"
#include "pearl/corpus.hpp"
#include "pearl/ranking.hpp"
#include "pearl/stats.hpp"

namespace pearl::baselines {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  CorpusStats stats;  // built over the candidate set being searched
};

// Okapi BM25:
//   sum over query tokens of idf(t) * tf(t,d) * (k1 + 1)
//                          / (tf(t,d) + k1 * (1 - b + b * |d| / avgdl))
// with idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)).
double bm25_score(const Bm25Params& params, const std::string& request_text,
                  const corpus::Document& doc);
double bm25_score_text(const Bm25Params& params, const std::string& request_text,
                       const std::string& doc_text);

std::vector<ScoredDoc> bm25_rank(const Bm25Params& params, const std::string& request_text,
                                 const std::vector<corpus::Document>& docs);

// Seeded uniform permutation; scores are descending placement values so the
// result is sorted like every other ranking.
std::vector<ScoredDoc> random_rank(const std::vector<corpus::Document>& docs,
                                   std::uint64_t seed);

// Cosine similarity between the tf-idf vectors of request and document.
std::vector<ScoredDoc> dense_cosine_rank(const std::string& request_text,
                                         const std::vector<corpus::Document>& docs,
                                         const CorpusStats& stats);

// Ranks by the log-likelihood of the request conditioned on each document.
std::vector<ScoredDoc> ql_rank(const auxlm::NGramModel& model, const std::string& request_text,
                               const std::vector<corpus::Document>& docs,
                               double cache_weight = 0.3);

}  // namespace pearl::baselines
