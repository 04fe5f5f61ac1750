#include "pearl/retriever.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pearl/error.hpp"
#include "pearl/rng.hpp"

namespace pearl::retriever {

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
}

std::vector<double> softmax(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  std::vector<double> e(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    e[i] = std::exp(v[i] - m);
    sum += e[i];
  }
  for (auto& x : e) x /= sum;
  return e;
}

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - m);
  return m + std::log(sum);
}

// Shared core of the anchored and plain variants. Targets are temperature
// scaled; logits are not. with_anchor prepends (y0, logit 0).
double listwise_loss(std::span<const double> scores, std::span<const double> targets, double tau,
                     bool with_anchor, double anchor_y0) {
  if (scores.size() != targets.size() || scores.empty()) {
    throw std::invalid_argument("loss: scores and targets must be equal-length and non-empty");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("loss: tau must be > 0");
  check_finite(scores, "loss scores");
  check_finite(targets, "loss targets");
  if (with_anchor && !std::isfinite(anchor_y0)) {
    throw std::invalid_argument("loss: anchor must be finite");
  }

  std::vector<double> y;
  std::vector<double> s;
  if (with_anchor) {
    y.push_back(anchor_y0 / tau);
    s.push_back(0.0);
  }
  for (double t : targets) y.push_back(t / tau);
  for (double v : scores) s.push_back(v);

  const auto p = softmax(y);
  const double lse = log_sum_exp(s);
  double out = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) out -= p[i] * (s[i] - lse);
  return out;
}

std::vector<double> listwise_gradient(std::span<const double> scores,
                                      std::span<const double> targets, double tau,
                                      bool with_anchor, double anchor_y0) {
  if (scores.size() != targets.size() || scores.empty()) {
    throw std::invalid_argument("loss_gradient: scores and targets must be equal-length");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("loss_gradient: tau must be > 0");
  }
  check_finite(scores, "loss_gradient scores");
  check_finite(targets, "loss_gradient targets");

  std::vector<double> y;
  std::vector<double> s;
  if (with_anchor) {
    y.push_back(anchor_y0 / tau);
    s.push_back(0.0);
  }
  for (double t : targets) y.push_back(t / tau);
  for (double v : scores) s.push_back(v);

  const auto p = softmax(y);
  const auto q = softmax(s);
  const std::size_t offset = with_anchor ? 1 : 0;
  std::vector<double> grad(scores.size());
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = q[i + offset] - p[i + offset];
  return grad;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return (m % 2 == 1) ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

void write_row(std::ostream& out, const std::vector<double>& v, std::size_t begin,
               std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out << ' ';
    out << io::format_double(v[begin + i]);
  }
  out << '\n';
}

}  // namespace

double loss(std::span<const double> scores, std::span<const double> targets, double anchor_y0,
            double tau) {
  return listwise_loss(scores, targets, tau, true, anchor_y0);
}

std::vector<double> loss_gradient(std::span<const double> scores, std::span<const double> targets,
                                  double anchor_y0, double tau) {
  return listwise_gradient(scores, targets, tau, true, anchor_y0);
}

double standard_kl_loss(std::span<const double> scores, std::span<const double> targets,
                        double tau) {
  return listwise_loss(scores, targets, tau, false, 0.0);
}

std::vector<double> standard_kl_gradient(std::span<const double> scores,
                                         std::span<const double> targets, double tau) {
  return listwise_gradient(scores, targets, tau, false, 0.0);
}

double CrossScorer::score(const PairFeatures& x) const {
  const auto fcount = static_cast<std::size_t>(feature_count);
  const auto hcount = static_cast<std::size_t>(hidden);
  double out = 0.0;
  for (std::size_t h = 0; h < hcount; ++h) {
    double z = bias[h];
    for (std::size_t f = 0; f < fcount; ++f) z += weights_in[f * hcount + h] * x[f];
    out += weights_out[h] * std::tanh(z);
  }
  return out;
}

void CrossScorer::write(std::ostream& out) const {
  out << "pearl-scorer v1\n";
  out << "config_hash " << stamp.config_hash << '\n';
  out << "seed " << stamp.seed << '\n';
  out << "features " << feature_count << '\n';
  out << "hidden " << hidden << '\n';
  out << "tau " << io::format_double(tau) << '\n';
  out << "anchor_y0 " << io::format_double(anchor_y0) << '\n';
  out << "W\n";
  for (int f = 0; f < feature_count; ++f) {
    write_row(out, weights_in, static_cast<std::size_t>(f) * static_cast<std::size_t>(hidden),
              static_cast<std::size_t>(hidden));
  }
  out << "b\n";
  write_row(out, bias, 0, bias.size());
  out << "w\n";
  write_row(out, weights_out, 0, weights_out.size());
  train_stats.write(out);
}

CrossScorer CrossScorer::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "pearl-scorer v1") {
    throw ParseError("scorer model: bad or missing version header");
  }
  CrossScorer sc;
  std::string tag;
  in >> tag >> sc.stamp.config_hash;
  if (tag != "config_hash") throw ParseError("scorer model: expected config_hash");
  in >> tag >> sc.stamp.seed;
  if (tag != "seed") throw ParseError("scorer model: expected seed");
  in >> tag >> sc.feature_count;
  if (tag != "features" || sc.feature_count <= 0) throw ParseError("scorer model: bad features");
  in >> tag >> sc.hidden;
  if (tag != "hidden" || sc.hidden <= 0) throw ParseError("scorer model: bad hidden");

  std::string num;
  in >> tag >> num;
  if (tag != "tau") throw ParseError("scorer model: expected tau");
  sc.tau = io::parse_double(num);
  in >> tag >> num;
  if (tag != "anchor_y0") throw ParseError("scorer model: expected anchor_y0");
  sc.anchor_y0 = io::parse_double(num);

  const auto fcount = static_cast<std::size_t>(sc.feature_count);
  const auto hcount = static_cast<std::size_t>(sc.hidden);
  in >> tag;
  if (tag != "W") throw ParseError("scorer model: expected W");
  sc.weights_in.resize(fcount * hcount);
  for (auto& v : sc.weights_in) {
    in >> num;
    v = io::parse_double(num);
  }
  in >> tag;
  if (tag != "b") throw ParseError("scorer model: expected b");
  sc.bias.resize(hcount);
  for (auto& v : sc.bias) {
    in >> num;
    v = io::parse_double(num);
  }
  in >> tag;
  if (tag != "w") throw ParseError("scorer model: expected w");
  sc.weights_out.resize(hcount);
  for (auto& v : sc.weights_out) {
    in >> num;
    v = io::parse_double(num);
  }
  if (!in) throw ParseError("scorer model: truncated parameters");
  sc.train_stats = CorpusStats::read(in);
  return sc;
}

void CrossScorer::save(const std::string& path) const {
  std::ostringstream out;
  write(out);
  io::atomic_write(path, out.str());
}

CrossScorer CrossScorer::load(const std::string& path) {
  std::istringstream in(io::read_file(path));
  return read(in);
}

TrainResult train(const std::vector<trainsel::TrainingGroup>& groups, const TrainConfig& config) {
  if (groups.empty()) throw std::invalid_argument("train: groups must be non-empty");
  if (config.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (!(config.tau > 0.0)) throw std::invalid_argument("train: tau must be > 0");

  // Statistics snapshot over the distinct documents in the training set,
  // first-seen order.
  std::vector<std::string> texts;
  std::set<std::string> seen;
  for (const auto& g : groups) {
    if (seen.insert(g.positive.doc_id).second) texts.push_back(g.positive.text);
    for (const auto& neg : g.negatives) {
      if (seen.insert(neg.doc_id).second) texts.push_back(neg.text);
    }
  }
  const CorpusStats stats = CorpusStats::build_from_texts(texts);

  struct GroupData {
    std::vector<PairFeatures> x;
    std::vector<double> y;
  };
  std::vector<GroupData> data;
  data.reserve(groups.size());
  std::vector<double> positive_ys;
  positive_ys.reserve(groups.size());
  for (const auto& g : groups) {
    GroupData gd;
    gd.x.push_back(encode_pair_text(g.request_text, g.positive.text, stats));
    gd.y.push_back(g.positive.y);
    for (const auto& neg : g.negatives) {
      gd.x.push_back(encode_pair_text(g.request_text, neg.text, stats));
      gd.y.push_back(neg.y);
    }
    positive_ys.push_back(g.positive.y);
    data.push_back(std::move(gd));
  }

  const double y0 = config.anchor_from_median ? median(positive_ys) : config.anchor_y0;

  constexpr int F = kFeatureCount;
  constexpr int H = kHiddenUnits;
  CrossScorer scorer;
  scorer.anchor_y0 = y0;
  scorer.tau = config.tau;
  scorer.train_stats = stats;
  SplitMix64 rng(sub_seed(config.seed, "init"));
  const double a_in = 1.0 / std::sqrt(static_cast<double>(F));
  const double a_out = 1.0 / std::sqrt(static_cast<double>(H));
  scorer.weights_in.resize(static_cast<std::size_t>(F) * H);
  for (auto& v : scorer.weights_in) v = rng.next_in(-a_in, a_in);
  scorer.bias.resize(H);
  for (auto& v : scorer.bias) v = rng.next_in(-a_in, a_in);
  scorer.weights_out.resize(H);
  for (auto& v : scorer.weights_out) v = rng.next_in(-a_out, a_out);

  std::vector<double> grad_in(scorer.weights_in.size());
  std::vector<double> grad_bias(scorer.bias.size());
  std::vector<double> grad_out(scorer.weights_out.size());
  const double inv_groups = 1.0 / static_cast<double>(data.size());

  double epoch_loss = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::fill(grad_in.begin(), grad_in.end(), 0.0);
    std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    double total = 0.0;

    for (const auto& gd : data) {
      const std::size_t m = gd.x.size();
      std::vector<double> hidden_act(m * H);
      std::vector<double> s(m);
      for (std::size_t j = 0; j < m; ++j) {
        double sj = 0.0;
        for (int h = 0; h < H; ++h) {
          double z = scorer.bias[static_cast<std::size_t>(h)];
          for (int f = 0; f < F; ++f) {
            z += scorer.weights_in[static_cast<std::size_t>(f) * H + h] * gd.x[j][f];
          }
          const double act = std::tanh(z);
          hidden_act[j * H + static_cast<std::size_t>(h)] = act;
          sj += scorer.weights_out[static_cast<std::size_t>(h)] * act;
        }
        s[j] = sj;
      }

      total += config.scale_calibrated ? loss(s, gd.y, y0, config.tau)
                                       : standard_kl_loss(s, gd.y, config.tau);
      const auto ds = config.scale_calibrated
                          ? loss_gradient(s, gd.y, y0, config.tau)
                          : standard_kl_gradient(s, gd.y, config.tau);

      for (std::size_t j = 0; j < m; ++j) {
        for (int h = 0; h < H; ++h) {
          const double act = hidden_act[j * H + static_cast<std::size_t>(h)];
          grad_out[static_cast<std::size_t>(h)] += ds[j] * act;
          const double d_act = ds[j] * scorer.weights_out[static_cast<std::size_t>(h)] *
                               (1.0 - act * act);
          grad_bias[static_cast<std::size_t>(h)] += d_act;
          for (int f = 0; f < F; ++f) {
            grad_in[static_cast<std::size_t>(f) * H + h] += d_act * gd.x[j][f];
          }
        }
      }
    }

    epoch_loss = total * inv_groups;
    if (!std::isfinite(epoch_loss)) {
      throw std::runtime_error("train: loss diverged at epoch " + std::to_string(epoch));
    }
    const double step = config.learning_rate * inv_groups;
    for (std::size_t i = 0; i < scorer.weights_in.size(); ++i) {
      scorer.weights_in[i] -= step * grad_in[i];
    }
    for (std::size_t i = 0; i < scorer.bias.size(); ++i) scorer.bias[i] -= step * grad_bias[i];
    for (std::size_t i = 0; i < scorer.weights_out.size(); ++i) {
      scorer.weights_out[i] -= step * grad_out[i];
    }
  }

  return TrainResult{std::move(scorer), epoch_loss};
}

std::vector<ScoredDoc> rank(const CrossScorer& scorer, const std::string& request_text,
                            const std::vector<corpus::Document>& docs) {
  if (docs.empty()) throw std::invalid_argument("rank: docs must be non-empty");
  const CorpusStats stats = CorpusStats::build(docs);
  std::vector<ScoredDoc> ranked;
  ranked.reserve(docs.size());
  for (const auto& doc : docs) {
    ranked.push_back(ScoredDoc{doc.doc_id, scorer.score(encode_pair(request_text, doc, stats))});
  }
  sort_ranked(ranked);
  return ranked;
}

double top1_score(const CrossScorer& scorer, const std::string& request_text,
                  const std::vector<corpus::Document>& docs) {
  return rank(scorer, request_text, docs).front().score;
}

}  // namespace pearl::retriever
