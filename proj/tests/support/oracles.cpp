#include "support/oracles.hpp"

#include <cmath>
#include <map>
#include <set>

#include "pearl/text.hpp"

namespace pearl::testsupport {

namespace {

using Tokens = std::vector<std::string>;

constexpr const char* kUnk = "<unk>";
constexpr const char* kBos = "<s>";

}  // namespace

double oracle_log_likelihood(const std::vector<std::string>& training_texts, int order, double k,
                             const std::vector<double>& weights, const std::string& target,
                             const std::vector<std::string>& segments, double lambda) {
  std::set<std::string> vocab;
  vocab.insert(kUnk);
  std::vector<Tokens> token_texts;
  for (const auto& t : training_texts) {
    token_texts.push_back(text::tokenize(t));
    for (const auto& w : token_texts.back()) vocab.insert(w);
  }
  const auto map_tok = [&](const std::string& w) -> std::string {
    if (w == kBos || vocab.contains(w)) return w;
    return kUnk;
  };

  std::map<Tokens, std::map<std::string, long>> counts;
  for (const auto& toks : token_texts) {
    Tokens padded(static_cast<std::size_t>(order - 1), kBos);
    padded.insert(padded.end(), toks.begin(), toks.end());
    for (std::size_t i = static_cast<std::size_t>(order - 1); i < padded.size(); ++i) {
      for (int o = 1; o <= order; ++o) {
        const Tokens hist(padded.begin() + static_cast<std::ptrdiff_t>(i - (o - 1)),
                          padded.begin() + static_cast<std::ptrdiff_t>(i));
        ++counts[hist][padded[i]];
      }
    }
  }

  const double vsize = static_cast<double>(vocab.size());
  const auto addk = [&](const std::string& tok, const Tokens& hist) {
    long c = 0;
    long total = 0;
    const auto it = counts.find(hist);
    if (it != counts.end()) {
      for (const auto& [w, n] : it->second) total += n;
      const auto jt = it->second.find(tok);
      if (jt != it->second.end()) c = jt->second;
    }
    return (static_cast<double>(c) + k) / (static_cast<double>(total) + k * vsize);
  };

  std::map<std::string, long> cache;
  long cache_len = 0;
  for (const auto& seg : segments) {
    for (const auto& w : text::tokenize(seg)) {
      ++cache[map_tok(w)];
      ++cache_len;
    }
  }

  Tokens stream(static_cast<std::size_t>(order - 1), kBos);
  double total = 0.0;
  for (const auto& raw : text::tokenize(target)) {
    const auto tok = map_tok(raw);
    long cached = 0;
    if (const auto it = cache.find(tok); it != cache.end()) cached = it->second;
    const double p_cache =
        (static_cast<double>(cached) + k) / (static_cast<double>(cache_len) + k * vsize);

    double p_ngram = 0.0;
    for (int o = 1; o <= order; ++o) {
      const Tokens hist(stream.end() - (o - 1), stream.end());
      p_ngram += weights[static_cast<std::size_t>(order - o)] * addk(tok, hist);
    }
    total += std::log(lambda * p_cache + (1.0 - lambda) * p_ngram);
    stream.push_back(tok);
  }
  return total;
}

eval::RougeScore oracle_rouge(const std::string& candidate, const std::string& reference, int n) {
  const auto grams = [n](const std::string& s) {
    std::map<Tokens, std::size_t> out;
    const auto toks = text::tokenize(s);
    if (toks.size() >= static_cast<std::size_t>(n)) {
      for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i) {
        ++out[Tokens(toks.begin() + static_cast<std::ptrdiff_t>(i),
                     toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
      }
    }
    return out;
  };

  const auto cand = grams(candidate);
  const auto ref = grams(reference);
  std::size_t cand_total = 0;
  std::size_t ref_total = 0;
  std::size_t overlap = 0;
  for (const auto& [g, c] : cand) cand_total += c;
  for (const auto& [g, c] : ref) ref_total += c;
  for (const auto& [g, c] : cand) {
    const auto it = ref.find(g);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }

  eval::RougeScore score;
  score.precision =
      cand_total == 0 ? 0.0 : static_cast<double>(overlap) / static_cast<double>(cand_total);
  score.recall =
      ref_total == 0 ? 0.0 : static_cast<double>(overlap) / static_cast<double>(ref_total);
  score.f1 = (score.precision + score.recall) == 0.0
                 ? 0.0
                 : 2.0 * score.precision * score.recall / (score.precision + score.recall);
  return score;
}

}  // namespace pearl::testsupport
