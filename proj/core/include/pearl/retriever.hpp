#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pearl/corpus.hpp"
#include "pearl/features.hpp"
#include "pearl/io.hpp"
#include "pearl/ranking.hpp"
#include "pearl/stats.hpp"
#include "pearl/trainsel.hpp"

namespace pearl::retriever {

inline constexpr int kHiddenUnits = 16;  // H

// Anchored, temperature-scaled listwise cross-entropy. With target scores y
// (positive first, then negatives), model logits s, anchor target y0 and a
// fixed anchor logit of 0, the loss is
//   -sum_i softmax([y0, y] / tau)_i * log softmax([0, s])_i.
// The anchor pins the scale: the minimum over s sits exactly at
// s_i = (y_i - y0) / tau. Temperature applies to the targets only.
double loss(std::span<const double> scores, std::span<const double> targets, double anchor_y0,
            double tau);

// d loss / d s_i for each non-anchor slot:
//   softmax([0, s])_{i+1} - softmax([y0, y] / tau)_{i+1}.
// The anchor logit is a constant and receives no gradient.
std::vector<double> loss_gradient(std::span<const double> scores, std::span<const double> targets,
                                  double anchor_y0, double tau);

// The un-anchored ablation: plain softmax cross-entropy over the list.
double standard_kl_loss(std::span<const double> scores, std::span<const double> targets,
                        double tau);
std::vector<double> standard_kl_gradient(std::span<const double> scores,
                                         std::span<const double> targets, double tau);

// Two-layer scoring head over pair features: score(q, d) = w . tanh(W^T x + b).
// Immutable once trained; scoring and ranking are pure.
struct CrossScorer {
  int feature_count = kFeatureCount;
  int hidden = kHiddenUnits;
  std::vector<double> weights_in;   // W, feature-major: weights_in[f * hidden + h]
  std::vector<double> bias;         // b, length hidden
  std::vector<double> weights_out;  // w, length hidden
  double anchor_y0 = 0.0;
  double tau = 5.0;
  CorpusStats train_stats;  // feature-corpus statistics snapshot from training
  io::RunStamp stamp;

  double score(const PairFeatures& x) const;

  void write(std::ostream& out) const;
  static CrossScorer read(std::istream& in);
  void save(const std::string& path) const;
  static CrossScorer load(const std::string& path);
};

struct TrainConfig {
  double tau = 5.0;
  bool anchor_from_median = true;  // y0 = median of positive scores over all groups
  double anchor_y0 = 0.0;          // used when anchor_from_median is false
  double learning_rate = 0.05;
  int epochs = 30;
  std::uint64_t seed = 0;
  bool scale_calibrated = true;  // false trains the standard-KL ablation
};

struct TrainResult {
  CrossScorer scorer;
  double final_loss = 0.0;  // mean loss over the last epoch's forward pass
};

// Full-batch gradient descent in a fixed group order. Parameters initialize
// uniformly in +-1/sqrt(fan_in) from the config seed; two runs with the same
// seed and data produce bit-identical scorers. Feature statistics are built
// over the distinct documents appearing in the groups and snapshotted into
// the scorer. Throws when the loss becomes non-finite, naming the epoch.
TrainResult train(const std::vector<trainsel::TrainingGroup>& groups, const TrainConfig& config);

// Scores every document against the request (statistics built from the given
// documents, i.e. the user's candidate set) and returns the full list sorted
// descending, ties by doc_id. Callers take the top k.
std::vector<ScoredDoc> rank(const CrossScorer& scorer, const std::string& request_text,
                            const std::vector<corpus::Document>& docs);

// Score of the rank-1 document; the request's performance-prediction signal.
double top1_score(const CrossScorer& scorer, const std::string& request_text,
                  const std::vector<corpus::Document>& docs);

}  // namespace pearl::retriever
