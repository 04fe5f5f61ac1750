#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pearl::eval {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram overlap under the shared tokenizer (no stemming, no
// stopword removal): recall = overlap / |reference n-grams|, precision =
// overlap / |candidate n-grams|, f1 = 2PR/(P+R). Empty n-gram sets give 0.
RougeScore rouge_n(const std::string& candidate, const std::string& reference, int n);

enum class StanceLabel { YTA, NTA, UNK };
const char* to_string(StanceLabel label);
StanceLabel stance_from_string(const std::string& s);

// Case-insensitive, word-boundary-aware rule table; the earliest match in
// reading order wins (longer pattern on position ties), no match is UNK.
StanceLabel stance_label(const std::string& comment);

// Unweighted mean of per-class F1 over {YTA, NTA}. Gold labels must be
// YTA/NTA; a predicted UNK counts as a wrong prediction for the gold class.
double macro_f1(const std::vector<StanceLabel>& predicted, const std::vector<StanceLabel>& gold);

// Sample Pearson correlation; throws std::domain_error when either side has
// zero variance.
double pearson_r(std::span<const double> x, std::span<const double> y);

struct CalibrationBin {
  double bin_start = 0.0;   // minimum s1 falling in the bin
  double mean_metric = 0.0;
  std::size_t count = 0;
};

struct CalibrationReport {
  double pearson_r = 0.0;           // over (bin_start, bin mean metric)
  double pearson_r_unbinned = 0.0;  // over the raw (s1, metric) pairs
  std::vector<CalibrationBin> bins;
  std::string metric_name;
};

// Sorts by s1, splits into num_bins equal-count bins (sizes within one of
// each other) and correlates bin starts with per-bin metric means.
CalibrationReport binned_calibration(std::span<const double> s1_scores,
                                     std::span<const double> metric_values, std::size_t num_bins,
                                     const std::string& metric_name = "");

}  // namespace pearl::eval
