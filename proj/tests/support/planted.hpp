#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pearl/corpus.hpp"

namespace pearl::testsupport {

// Synthetic corpus with one disjoint topic vocabulary per document, so every
// request names content words of exactly one "planted" document and top-1
// retrieval accuracy is exact.
struct PlantedOptions {
  int users = 50;
  int docs_per_user = 20;
  int words_per_doc = 20;
  int topic_vocab = 8;  // distinct words per document topic
  std::uint64_t seed = 1;
};

struct PlantedCorpus {
  PlantedOptions options;
  std::vector<corpus::UserHistory> histories;
};

PlantedCorpus make_planted(const PlantedOptions& options);

// Synthetic requests for documents [first_doc, last_doc) of every user; the
// request's target (and reference) text is the planted document's text.
std::vector<corpus::RequestTarget> planted_requests(const PlantedCorpus& corpus, int first_doc,
                                                    int last_doc);

// The planted document id behind a synthetic request.
std::string planted_doc_id(const corpus::RequestTarget& request);

std::string planted_user_id(int user);
std::string planted_id(int user, int doc);

}  // namespace pearl::testsupport
