#include "pearl/baselines.hpp"

#include <map>
#include <stdexcept>

#include "pearl/rng.hpp"
#include "pearl/text.hpp"

namespace pearl::baselines {

double bm25_score_text(const Bm25Params& params, const std::string& request_text,
                       const std::string& doc_text) {
  if (!(params.k1 > 0.0)) throw std::invalid_argument("bm25: k1 must be > 0");
  if (!(params.b >= 0.0 && params.b <= 1.0)) throw std::invalid_argument("bm25: b must be in [0,1]");

  const auto q_tokens = text::tokenize(request_text);
  const auto d_tokens = text::tokenize(doc_text);
  std::map<std::string, std::size_t> tf;
  for (const auto& t : d_tokens) ++tf[t];

  const double avgdl = params.stats.avg_doc_len();
  const double len_norm =
      avgdl > 0.0 ? static_cast<double>(d_tokens.size()) / avgdl : 1.0;

  double score = 0.0;
  for (const auto& term : q_tokens) {
    const auto it = tf.find(term);
    if (it == tf.end()) continue;
    const auto freq = static_cast<double>(it->second);
    const double denom = freq + params.k1 * (1.0 - params.b + params.b * len_norm);
    score += params.stats.bm25_idf(term) * freq * (params.k1 + 1.0) / denom;
  }
  return score;
}

double bm25_score(const Bm25Params& params, const std::string& request_text,
                  const corpus::Document& doc) {
  return bm25_score_text(params, request_text, doc.text);
}

std::vector<ScoredDoc> bm25_rank(const Bm25Params& params, const std::string& request_text,
                                 const std::vector<corpus::Document>& docs) {
  std::vector<ScoredDoc> ranked;
  ranked.reserve(docs.size());
  for (const auto& doc : docs) {
    ranked.push_back(ScoredDoc{doc.doc_id, bm25_score(params, request_text, doc)});
  }
  sort_ranked(ranked);
  return ranked;
}

std::vector<ScoredDoc> random_rank(const std::vector<corpus::Document>& docs,
                                   std::uint64_t seed) {
  if (docs.empty()) throw std::invalid_argument("random_rank: docs must be non-empty");
  std::vector<std::size_t> idx(docs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  SplitMix64 rng(seed);
  rng.shuffle(idx);

  std::vector<ScoredDoc> ranked;
  ranked.reserve(docs.size());
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    ranked.push_back(
        ScoredDoc{docs[idx[pos]].doc_id, static_cast<double>(idx.size() - pos)});
  }
  return ranked;
}

std::vector<ScoredDoc> dense_cosine_rank(const std::string& request_text,
                                         const std::vector<corpus::Document>& docs,
                                         const CorpusStats& stats) {
  if (docs.empty()) throw std::invalid_argument("dense_cosine_rank: docs must be non-empty");
  const auto q_vec = tfidf_vector(text::tokenize(request_text), stats);
  std::vector<ScoredDoc> ranked;
  ranked.reserve(docs.size());
  for (const auto& doc : docs) {
    const auto d_vec = tfidf_vector(text::tokenize(doc.text), stats);
    ranked.push_back(ScoredDoc{doc.doc_id, cosine(q_vec, d_vec)});
  }
  sort_ranked(ranked);
  return ranked;
}

std::vector<ScoredDoc> ql_rank(const auxlm::NGramModel& model, const std::string& request_text,
                               const std::vector<corpus::Document>& docs, double cache_weight) {
  if (docs.empty()) throw std::invalid_argument("ql_rank: docs must be non-empty");
  std::vector<ScoredDoc> ranked;
  ranked.reserve(docs.size());
  for (const auto& doc : docs) {
    ranked.push_back(
        ScoredDoc{doc.doc_id, auxlm::query_likelihood(model, request_text, doc, cache_weight)});
  }
  sort_ranked(ranked);
  return ranked;
}

}  // namespace pearl::baselines
