#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pearl/corpus.hpp"

namespace pearl {

// Term statistics over a document collection, normally one user's candidate
// set. Document frequencies count documents whose token set contains the
// term. Immutable once built; safe for concurrent reads.
class CorpusStats {
 public:
  CorpusStats() = default;

  static CorpusStats build(const std::vector<corpus::Document>& docs);
  static CorpusStats build_from_texts(const std::vector<std::string>& texts);

  std::size_t doc_count() const { return doc_count_; }
  std::size_t total_tokens() const { return total_tokens_; }
  double avg_doc_len() const;
  std::size_t doc_freq(const std::string& term) const;

  // Smoothed idf used for tf-idf vectors: ln((1 + N) / (1 + df)) + 1.
  double idf(const std::string& term) const;

  // Okapi idf: ln(1 + (N - df + 0.5) / (df + 0.5)).
  double bm25_idf(const std::string& term) const;

  void write(std::ostream& out) const;
  static CorpusStats read(std::istream& in);

  bool operator==(const CorpusStats&) const = default;

 private:
  std::map<std::string, std::size_t> df_;
  std::size_t doc_count_ = 0;
  std::size_t total_tokens_ = 0;
};

// Sparse tf-idf vector: term -> tf * idf under the shared tokenizer.
std::map<std::string, double> tfidf_vector(const std::vector<std::string>& tokens,
                                           const CorpusStats& stats);

// Cosine similarity of two sparse vectors; 0 when either has zero norm.
double cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

}  // namespace pearl
