#pragma once

#include <array>
#include <string>

#include "pearl/corpus.hpp"
#include "pearl/stats.hpp"

namespace pearl::retriever {

inline constexpr int kFeatureCount = 10;  // F

// Deterministic request/document pair features, all finite; components
// 0-4 and 7-9 lie in [0, 1]:
//   0  unigram Jaccard(q, d)
//   1  fraction of q's distinct unigrams present in d
//   2  bigram Jaccard
//   3  tf-idf cosine (idf from the candidate corpus stats)
//   4  BM25(q, d) / (1 + BM25(q, d))
//   5  log(1 + |d| tokens)
//   6  log(1 + |q| tokens)
//   7  |d| / (|q| + |d|)
//   8  character 3-gram Jaccard
//   9  fraction of q's above-median-idf terms present in d
using PairFeatures = std::array<double, kFeatureCount>;

PairFeatures encode_pair(const std::string& request_text, const corpus::Document& doc,
                         const CorpusStats& stats);
PairFeatures encode_pair_text(const std::string& request_text, const std::string& doc_text,
                              const CorpusStats& stats);

}  // namespace pearl::retriever
