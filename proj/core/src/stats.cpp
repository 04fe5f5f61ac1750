#include "pearl/stats.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "pearl/error.hpp"
#include "pearl/text.hpp"

namespace pearl {

CorpusStats CorpusStats::build(const std::vector<corpus::Document>& docs) {
  std::vector<std::string> texts;
  texts.reserve(docs.size());
  for (const auto& d : docs) texts.push_back(d.text);
  return build_from_texts(texts);
}

CorpusStats CorpusStats::build_from_texts(const std::vector<std::string>& texts) {
  CorpusStats stats;
  for (const auto& t : texts) {
    const auto tokens = text::tokenize(t);
    stats.total_tokens_ += tokens.size();
    const std::set<std::string> distinct(tokens.begin(), tokens.end());
    for (const auto& term : distinct) ++stats.df_[term];
    ++stats.doc_count_;
  }
  return stats;
}

double CorpusStats::avg_doc_len() const {
  if (doc_count_ == 0) return 0.0;
  return static_cast<double>(total_tokens_) / static_cast<double>(doc_count_);
}

std::size_t CorpusStats::doc_freq(const std::string& term) const {
  const auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

double CorpusStats::idf(const std::string& term) const {
  const auto n = static_cast<double>(doc_count_);
  const auto df = static_cast<double>(doc_freq(term));
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

double CorpusStats::bm25_idf(const std::string& term) const {
  const auto n = static_cast<double>(doc_count_);
  const auto df = static_cast<double>(doc_freq(term));
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

void CorpusStats::write(std::ostream& out) const {
  out << "stats " << doc_count_ << ' ' << total_tokens_ << ' ' << df_.size() << '\n';
  for (const auto& [term, df] : df_) {
    out << term << ' ' << df << '\n';
  }
}

CorpusStats CorpusStats::read(std::istream& in) {
  std::string tag;
  in >> tag;
  if (tag != "stats") throw ParseError("corpus stats: expected 'stats' header");
  std::size_t n_terms = 0;
  CorpusStats stats;
  in >> stats.doc_count_ >> stats.total_tokens_ >> n_terms;
  if (!in) throw ParseError("corpus stats: malformed header");
  for (std::size_t i = 0; i < n_terms; ++i) {
    std::string term;
    std::size_t df = 0;
    in >> term >> df;
    if (!in) throw ParseError("corpus stats: truncated term table");
    stats.df_[term] = df;
  }
  return stats;
}

std::map<std::string, double> tfidf_vector(const std::vector<std::string>& tokens,
                                           const CorpusStats& stats) {
  std::map<std::string, std::size_t> tf;
  for (const auto& tok : tokens) ++tf[tok];
  std::map<std::string, double> vec;
  for (const auto& [term, count] : tf) {
    vec[term] = static_cast<double>(count) * stats.idf(term);
  }
  return vec;
}

double cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double dot = 0.0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& [term, va] : small) {
    const auto it = large.find(term);
    if (it != large.end()) dot += va * it->second;
  }
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [term, v] : a) na += v * v;
  for (const auto& [term, v] : b) nb += v * v;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace pearl
