#include "pearl/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "pearl/baselines.hpp"
#include "pearl/text.hpp"

namespace pearl::retriever {

namespace {

template <typename T>
double jaccard(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : a) {
    if (b.contains(x)) ++inter;
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::set<std::string> to_set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

PairFeatures encode_pair_text(const std::string& request_text, const std::string& doc_text,
                              const CorpusStats& stats) {
  const auto q_tokens = text::tokenize(request_text);
  const auto d_tokens = text::tokenize(doc_text);
  const auto q_set = to_set(q_tokens);
  const auto d_set = to_set(d_tokens);
  const auto q_bigrams = to_set(text::ngrams(q_tokens, 2));
  const auto d_bigrams = to_set(text::ngrams(d_tokens, 2));

  PairFeatures f{};
  f[0] = jaccard(q_set, d_set);

  std::size_t q_in_d = 0;
  for (const auto& t : q_set) {
    if (d_set.contains(t)) ++q_in_d;
  }
  f[1] = q_set.empty() ? 0.0 : static_cast<double>(q_in_d) / static_cast<double>(q_set.size());

  f[2] = jaccard(q_bigrams, d_bigrams);
  f[3] = cosine(tfidf_vector(q_tokens, stats), tfidf_vector(d_tokens, stats));

  baselines::Bm25Params bm25;
  bm25.stats = stats;
  const double bm = baselines::bm25_score_text(bm25, request_text, doc_text);
  f[4] = bm / (1.0 + bm);

  f[5] = std::log(1.0 + static_cast<double>(d_tokens.size()));
  f[6] = std::log(1.0 + static_cast<double>(q_tokens.size()));

  const auto total = static_cast<double>(q_tokens.size() + d_tokens.size());
  f[7] = total == 0.0 ? 0.0 : static_cast<double>(d_tokens.size()) / total;

  f[8] = jaccard(text::char_trigrams(request_text), text::char_trigrams(doc_text));

  // Coverage of the request's rarer half: terms whose idf is at or above the
  // median idf of the request's distinct terms.
  if (!q_set.empty()) {
    std::vector<double> idfs;
    idfs.reserve(q_set.size());
    for (const auto& t : q_set) idfs.push_back(stats.idf(t));
    std::vector<double> sorted = idfs;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median =
        (m % 2 == 1) ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    std::size_t rare = 0;
    std::size_t rare_present = 0;
    std::size_t i = 0;
    for (const auto& t : q_set) {
      if (idfs[i] >= median) {
        ++rare;
        if (d_set.contains(t)) ++rare_present;
      }
      ++i;
    }
    f[9] = rare == 0 ? 0.0 : static_cast<double>(rare_present) / static_cast<double>(rare);
  }
  return f;
}

PairFeatures encode_pair(const std::string& request_text, const corpus::Document& doc,
                         const CorpusStats& stats) {
  return encode_pair_text(request_text, doc.text, stats);
}

}  // namespace pearl::retriever
