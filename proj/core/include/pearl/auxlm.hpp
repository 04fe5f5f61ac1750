#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "pearl/corpus.hpp"
#include "pearl/io.hpp"

namespace pearl::auxlm {

inline constexpr const char* kUnk = "<unk>";  // reserved out-of-vocabulary token
inline constexpr const char* kBos = "<s>";    // sentence-boundary padding, history only

// Conditioning material for likelihood scoring. Segments are concatenated
// (few-shot examples, candidate document, request, as applicable) and feed a
// unigram cache that is interpolated with the n-gram model, so the context
// can influence every scored token.
struct ConditionalContext {
  std::vector<std::string> segments;
  double cache_weight = 0.3;  // lambda, in [0, 1)
};

struct BenefitScore {
  std::string request_id;
  std::string doc_id;
  double y = 0.0;  // log-likelihood difference, nats
};

// Interpolated add-k n-gram language model. Immutable once trained; scoring
// is pure and safe for unbounded concurrent use.
class NGramModel {
 public:
  NGramModel() : NGramModel(3, 0.1) {}
  NGramModel(int order, double smoothing_k);
  NGramModel(int order, double smoothing_k, std::vector<double> interpolation_weights);

  int order() const { return order_; }
  double smoothing_k() const { return smoothing_k_; }
  const std::vector<double>& interpolation_weights() const { return weights_; }
  const std::set<std::string>& vocabulary() const { return vocab_; }
  std::size_t vocab_size() const { return vocab_.size(); }

  // Accumulates counts for all orders 1..order over one text, with
  // sentence-boundary padding at the front.
  void add_text(const std::string& raw_text);

  // Inserts a token into the vocabulary without touching counts. Lets tests
  // build untrained models with a known vocabulary.
  void add_vocab_token(const std::string& token);

  // Interpolated probability of token given the preceding tokens. Unknown
  // tokens (in either position) are mapped to the UNK symbol first.
  double prob(const std::string& token, const std::vector<std::string>& history) const;

  // Add-k probability at a single order (history_len = order - 1 tokens of
  // history are used). Exposed for the normalization property tests.
  double order_prob(const std::string& token, const std::vector<std::string>& history,
                    int ngram_order) const;

  std::uint64_t count(const std::vector<std::string>& history, const std::string& token) const;

  std::string map_token(const std::string& token) const;

  void write(std::ostream& out) const;
  static NGramModel read(std::istream& in);
  void save(const std::string& path) const;
  static NGramModel load(const std::string& path);

  io::RunStamp stamp;

 private:
  std::string key(const std::vector<std::string>& history, std::size_t hist_begin,
                  std::size_t hist_len, const std::string& token) const;

  int order_;
  double smoothing_k_;
  std::vector<double> weights_;  // index 0 = full order, last = unigram
  std::set<std::string> vocab_;  // includes kUnk, never kBos
  std::unordered_map<std::string, std::uint64_t> counts_;  // "h1 h2\x1etok" -> count
  std::unordered_map<std::string, std::uint64_t> totals_;  // "h1 h2" -> sum over tokens
};

// Default interpolation weights, highest order first. Order 3 uses
// {0.5, 0.3, 0.2}; other orders use a normalized geometric decay.
std::vector<double> default_interpolation_weights(int order);

// Trains on the given texts; vocabulary is every token seen plus UNK.
NGramModel train_ngram(const std::vector<std::string>& texts, int order = 3,
                       double smoothing_k = 0.1);

// Sum over the target's tokens of
//   log( lambda * p_cache(tok | context) + (1 - lambda) * p_ngram(tok | preceding) )
// where p_cache is the add-k smoothed unigram distribution over the
// concatenated context segments and p_ngram conditions only on preceding
// target tokens (with sentence-boundary padding). Context tokens are never
// scored themselves.
double log_likelihood(const NGramModel& model, const std::string& target,
                      const ConditionalContext& context);

// Difference of target log-likelihoods with the candidate document versus a
// fixed few-shot background:
//   y = LL(target | [doc, request]) - LL(target | [fewshot..., request]).
// The few-shot list must be the same for every request in a run.
BenefitScore benefit_score(const NGramModel& model, const corpus::RequestTarget& request,
                           const corpus::Document& doc, const std::vector<std::string>& fewshot,
                           double cache_weight = 0.3);

// Log-likelihood of the request conditioned on the document alone; the
// query-likelihood ranking score.
double query_likelihood(const NGramModel& model, const std::string& request_text,
                        const corpus::Document& doc, double cache_weight = 0.3);

}  // namespace pearl::auxlm
