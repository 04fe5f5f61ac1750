#include "pearl/auxlm.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pearl/error.hpp"
#include "pearl/text.hpp"

namespace pearl::auxlm {

namespace {

constexpr char kHistSep = '\x1f';   // between history tokens
constexpr char kTokenSep = '\x1e';  // between history and predicted token

std::string hist_key(const std::vector<std::string>& tokens, std::size_t begin,
                     std::size_t len) {
  std::string k;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) k += kHistSep;
    k += tokens[begin + i];
  }
  return k;
}

}  // namespace

std::vector<double> default_interpolation_weights(int order) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (order == 3) return {0.5, 0.3, 0.2};
  std::vector<double> w(static_cast<std::size_t>(order));
  double sum = 0.0;
  double v = 1.0;
  for (auto& x : w) {
    x = v;
    sum += v;
    v *= 0.6;
  }
  for (auto& x : w) x /= sum;
  return w;
}

NGramModel::NGramModel(int order, double smoothing_k)
    : NGramModel(order, smoothing_k, default_interpolation_weights(order)) {}

NGramModel::NGramModel(int order, double smoothing_k, std::vector<double> weights)
    : order_(order), smoothing_k_(smoothing_k), weights_(std::move(weights)) {
  if (order_ < 1) throw std::invalid_argument("NGramModel: order must be >= 1");
  if (!(smoothing_k_ > 0.0)) throw std::invalid_argument("NGramModel: smoothing_k must be > 0");
  if (weights_.size() != static_cast<std::size_t>(order_)) {
    throw std::invalid_argument("NGramModel: need one interpolation weight per order");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("NGramModel: negative interpolation weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("NGramModel: interpolation weights must sum to 1");
  }
  vocab_.insert(kUnk);
}

void NGramModel::add_vocab_token(const std::string& token) {
  vocab_.insert(token);
}

std::string NGramModel::map_token(const std::string& token) const {
  if (token == kBos) return token;
  return vocab_.contains(token) ? token : std::string(kUnk);
}

void NGramModel::add_text(const std::string& raw_text) {
  const auto tokens = text::tokenize(raw_text);
  for (const auto& t : tokens) vocab_.insert(t);

  std::vector<std::string> padded;
  padded.reserve(tokens.size() + static_cast<std::size_t>(order_) - 1);
  for (int i = 0; i < order_ - 1; ++i) padded.emplace_back(kBos);
  padded.insert(padded.end(), tokens.begin(), tokens.end());

  const auto start = static_cast<std::size_t>(order_ - 1);
  for (std::size_t i = start; i < padded.size(); ++i) {
    for (int o = 1; o <= order_; ++o) {
      const auto hist_len = static_cast<std::size_t>(o - 1);
      const std::string hk = hist_key(padded, i - hist_len, hist_len);
      ++counts_[hk + kTokenSep + padded[i]];
      ++totals_[hk];
    }
  }
}

double NGramModel::order_prob(const std::string& token, const std::vector<std::string>& history,
                              int ngram_order) const {
  const auto hist_len = static_cast<std::size_t>(ngram_order - 1);
  std::vector<std::string> hist;
  hist.reserve(hist_len);
  // Left-pad with the boundary symbol when the caller's history is shorter
  // than this order needs.
  if (history.size() >= hist_len) {
    for (std::size_t i = history.size() - hist_len; i < history.size(); ++i) {
      hist.push_back(map_token(history[i]));
    }
  } else {
    for (std::size_t i = 0; i < hist_len - history.size(); ++i) hist.emplace_back(kBos);
    for (const auto& h : history) hist.push_back(map_token(h));
  }

  const std::string hk = hist_key(hist, 0, hist.size());
  std::uint64_t c = 0;
  if (const auto it = counts_.find(hk + kTokenSep + map_token(token)); it != counts_.end()) {
    c = it->second;
  }
  std::uint64_t total = 0;
  if (const auto it = totals_.find(hk); it != totals_.end()) total = it->second;

  const double v = static_cast<double>(vocab_.size());
  return (static_cast<double>(c) + smoothing_k_) /
         (static_cast<double>(total) + smoothing_k_ * v);
}

double NGramModel::prob(const std::string& token, const std::vector<std::string>& history) const {
  double p = 0.0;
  for (int o = order_; o >= 1; --o) {
    p += weights_[static_cast<std::size_t>(order_ - o)] * order_prob(token, history, o);
  }
  return p;
}

std::uint64_t NGramModel::count(const std::vector<std::string>& history,
                                const std::string& token) const {
  std::vector<std::string> mapped;
  mapped.reserve(history.size());
  for (const auto& h : history) mapped.push_back(map_token(h));
  const std::string hk = hist_key(mapped, 0, mapped.size());
  const auto it = counts_.find(hk + kTokenSep + map_token(token));
  return it == counts_.end() ? 0 : it->second;
}

void NGramModel::write(std::ostream& out) const {
  out << "pearl-auxlm v1\n";
  out << "config_hash " << stamp.config_hash << '\n';
  out << "seed " << stamp.seed << '\n';
  out << "order " << order_ << '\n';
  out << "smoothing_k " << io::format_double(smoothing_k_) << '\n';
  out << "weights";
  for (double w : weights_) out << ' ' << io::format_double(w);
  out << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (const auto& tok : vocab_) out << tok << '\n';

  std::vector<std::string> keys;
  keys.reserve(counts_.size());
  for (const auto& [k, v] : counts_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  out << "counts " << keys.size() << '\n';
  for (const auto& k : keys) {
    std::string line = k;
    for (char& c : line) {
      if (c == kHistSep || c == kTokenSep) c = ' ';
    }
    out << line << ' ' << counts_.at(k) << '\n';
  }
}

NGramModel NGramModel::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "pearl-auxlm v1") {
    throw ParseError("auxlm model: bad or missing version header");
  }
  std::string tag;
  io::RunStamp stamp;
  in >> tag >> stamp.config_hash;
  if (tag != "config_hash") throw ParseError("auxlm model: expected config_hash");
  in >> tag >> stamp.seed;
  if (tag != "seed") throw ParseError("auxlm model: expected seed");

  int order = 0;
  in >> tag >> order;
  if (tag != "order" || order < 1) throw ParseError("auxlm model: bad order");
  std::string kstr;
  in >> tag >> kstr;
  if (tag != "smoothing_k") throw ParseError("auxlm model: expected smoothing_k");
  const double smoothing_k = io::parse_double(kstr);

  in >> tag;
  if (tag != "weights") throw ParseError("auxlm model: expected weights");
  std::vector<double> weights(static_cast<std::size_t>(order));
  for (auto& w : weights) {
    std::string ws;
    in >> ws;
    w = io::parse_double(ws);
  }

  NGramModel model(order, smoothing_k, weights);
  model.stamp = stamp;

  std::size_t n_vocab = 0;
  in >> tag >> n_vocab;
  if (tag != "vocab") throw ParseError("auxlm model: expected vocab");
  for (std::size_t i = 0; i < n_vocab; ++i) {
    std::string tok;
    in >> tok;
    if (!in) throw ParseError("auxlm model: truncated vocab");
    model.vocab_.insert(tok);
  }

  std::size_t n_counts = 0;
  in >> tag >> n_counts;
  if (tag != "counts") throw ParseError("auxlm model: expected counts");
  std::getline(in, line);  // consume rest of the counts header line
  for (std::size_t i = 0; i < n_counts; ++i) {
    if (!std::getline(in, line)) throw ParseError("auxlm model: truncated counts");
    std::istringstream ls(line);
    std::vector<std::string> fields;
    std::string f;
    while (ls >> f) fields.push_back(f);
    if (fields.size() < 2) throw ParseError("auxlm model: malformed count line");
    const std::uint64_t c = std::stoull(fields.back());
    const std::string& token = fields[fields.size() - 2];
    const std::string hk = hist_key(fields, 0, fields.size() - 2);
    model.counts_[hk + kTokenSep + token] = c;
    model.totals_[hk] += c;
  }
  return model;
}

void NGramModel::save(const std::string& path) const {
  std::ostringstream out;
  write(out);
  io::atomic_write(path, out.str());
}

NGramModel NGramModel::load(const std::string& path) {
  std::istringstream in(io::read_file(path));
  return read(in);
}

NGramModel train_ngram(const std::vector<std::string>& texts, int order, double smoothing_k) {
  if (texts.empty()) throw std::invalid_argument("train_ngram: texts must be non-empty");
  NGramModel model(order, smoothing_k);
  for (const auto& t : texts) model.add_text(t);
  return model;
}

double log_likelihood(const NGramModel& model, const std::string& target,
                      const ConditionalContext& context) {
  if (!(context.cache_weight >= 0.0 && context.cache_weight < 1.0)) {
    throw std::invalid_argument("log_likelihood: cache_weight must be in [0,1)");
  }
  const auto tokens = text::tokenize(target);

  std::unordered_map<std::string, std::size_t> cache;
  std::size_t cache_len = 0;
  for (const auto& seg : context.segments) {
    for (const auto& tok : text::tokenize(seg)) {
      ++cache[model.map_token(tok)];
      ++cache_len;
    }
  }

  const double k = model.smoothing_k();
  const double v = static_cast<double>(model.vocab_size());
  const double lambda = context.cache_weight;

  std::vector<std::string> history;
  history.reserve(tokens.size() + static_cast<std::size_t>(model.order()));
  for (int i = 0; i < model.order() - 1; ++i) history.emplace_back(kBos);

  double total = 0.0;
  for (const auto& raw : tokens) {
    const std::string tok = model.map_token(raw);
    double c = 0.0;
    if (const auto it = cache.find(tok); it != cache.end()) {
      c = static_cast<double>(it->second);
    }
    const double p_cache = (c + k) / (static_cast<double>(cache_len) + k * v);
    const double p_ngram = model.prob(tok, history);
    total += std::log(lambda * p_cache + (1.0 - lambda) * p_ngram);
    history.push_back(tok);
  }
  return total;
}

BenefitScore benefit_score(const NGramModel& model, const corpus::RequestTarget& request,
                           const corpus::Document& doc, const std::vector<std::string>& fewshot,
                           double cache_weight) {
  if (!request.target_text) {
    throw ValidationError("benefit_score: request '" + request.request_id +
                          "' has no target_text");
  }
  ConditionalContext with_doc;
  with_doc.segments = {doc.text, request.request_text};
  with_doc.cache_weight = cache_weight;

  ConditionalContext background;
  background.segments = fewshot;
  background.segments.push_back(request.request_text);
  background.cache_weight = cache_weight;

  const double with_ll = log_likelihood(model, *request.target_text, with_doc);
  const double without_ll = log_likelihood(model, *request.target_text, background);
  return BenefitScore{request.request_id, doc.doc_id, with_ll - without_ll};
}

double query_likelihood(const NGramModel& model, const std::string& request_text,
                        const corpus::Document& doc, double cache_weight) {
  if (text::trim(request_text).empty()) {
    throw std::invalid_argument("query_likelihood: request_text must be non-empty");
  }
  ConditionalContext ctx;
  ctx.segments = {doc.text};
  ctx.cache_weight = cache_weight;
  return log_likelihood(model, request_text, ctx);
}

}  // namespace pearl::auxlm
