#include "pearl/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "pearl/text.hpp"

namespace pearl::eval {

namespace {

std::map<std::string, std::size_t> ngram_counts(const std::string& s, int n) {
  std::map<std::string, std::size_t> counts;
  for (const auto& g : text::ngrams(text::tokenize(s), n)) ++counts[g];
  return counts;
}

bool boundary_ok(const std::string& hay, std::size_t pos, std::size_t len) {
  const auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  if (pos > 0 && alnum(hay[pos - 1])) return false;
  const auto end = pos + len;
  if (end < hay.size() && alnum(hay[end])) return false;
  return true;
}

struct StanceRule {
  const char* pattern;
  StanceLabel label;
};

// High-precision lexical rules. NTA patterns mirror the YTA set so both
// labels are reachable.
constexpr StanceRule kStanceRules[] = {
    {"yta", StanceLabel::YTA},
    {"you're the asshole", StanceLabel::YTA},
    {"you are the asshole", StanceLabel::YTA},
    {"you're the ah", StanceLabel::YTA},
    {"nta", StanceLabel::NTA},
    {"not the asshole", StanceLabel::NTA},
    {"you're not the asshole", StanceLabel::NTA},
};

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double f1() const {
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
  }
};

}  // namespace

RougeScore rouge_n(const std::string& candidate, const std::string& reference, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("rouge_n: n must be 1 or 2");
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);

  std::size_t cand_total = 0;
  for (const auto& [g, c] : cand) cand_total += c;
  std::size_t ref_total = 0;
  for (const auto& [g, c] : ref) ref_total += c;

  std::size_t overlap = 0;
  for (const auto& [g, c] : cand) {
    const auto it = ref.find(g);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }

  RougeScore score;
  score.precision = cand_total == 0 ? 0.0
                                    : static_cast<double>(overlap) / static_cast<double>(cand_total);
  score.recall = ref_total == 0 ? 0.0
                                : static_cast<double>(overlap) / static_cast<double>(ref_total);
  score.f1 = (score.precision + score.recall) == 0.0
                 ? 0.0
                 : 2.0 * score.precision * score.recall / (score.precision + score.recall);
  return score;
}

const char* to_string(StanceLabel label) {
  switch (label) {
    case StanceLabel::YTA:
      return "YTA";
    case StanceLabel::NTA:
      return "NTA";
    default:
      return "UNK";
  }
}

StanceLabel stance_from_string(const std::string& s) {
  if (s == "YTA") return StanceLabel::YTA;
  if (s == "NTA") return StanceLabel::NTA;
  return StanceLabel::UNK;
}

StanceLabel stance_label(const std::string& comment) {
  const std::string hay = text::lower_ascii(comment);
  std::size_t best_pos = std::string::npos;
  std::size_t best_len = 0;
  StanceLabel best = StanceLabel::UNK;
  for (const auto& rule : kStanceRules) {
    const std::string pattern(rule.pattern);
    std::size_t from = 0;
    while (true) {
      const auto pos = hay.find(pattern, from);
      if (pos == std::string::npos) break;
      if (boundary_ok(hay, pos, pattern.size())) {
        if (pos < best_pos || (pos == best_pos && pattern.size() > best_len)) {
          best_pos = pos;
          best_len = pattern.size();
          best = rule.label;
        }
        break;  // earliest boundary-valid occurrence of this pattern
      }
      from = pos + 1;
    }
  }
  return best;
}

double macro_f1(const std::vector<StanceLabel>& predicted, const std::vector<StanceLabel>& gold) {
  if (predicted.size() != gold.size()) {
    throw std::invalid_argument("macro_f1: predicted and gold must have equal length");
  }
  ClassCounts yta;
  ClassCounts nta;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == StanceLabel::UNK) {
      throw std::invalid_argument("macro_f1: gold labels must be YTA or NTA");
    }
    auto& cls = gold[i] == StanceLabel::YTA ? yta : nta;
    auto& other = gold[i] == StanceLabel::YTA ? nta : yta;
    if (predicted[i] == gold[i]) {
      ++cls.tp;
    } else {
      ++cls.fn;  // UNK predictions land here: wrong for the gold class
      if (predicted[i] != StanceLabel::UNK) ++other.fp;
    }
  }
  return 0.5 * (yta.f1() + nta.f1());
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson_r: need equal-length inputs of size >= 2");
  }
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::domain_error("pearson_r: undefined correlation (zero variance)");
  }
  return sxy / std::sqrt(sxx * syy);
}

CalibrationReport binned_calibration(std::span<const double> s1_scores,
                                     std::span<const double> metric_values, std::size_t num_bins,
                                     const std::string& metric_name) {
  if (s1_scores.size() != metric_values.size()) {
    throw std::invalid_argument("binned_calibration: input lengths differ");
  }
  if (num_bins < 2 || s1_scores.size() < num_bins) {
    throw std::invalid_argument("binned_calibration: need at least num_bins >= 2 points");
  }

  std::vector<std::size_t> order(s1_scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s1_scores[a] < s1_scores[b]; });

  CalibrationReport report;
  report.metric_name = metric_name;
  const std::size_t n = order.size();
  const std::size_t base = n / num_bins;
  const std::size_t extra = n % num_bins;

  std::size_t at = 0;
  std::vector<double> starts;
  std::vector<double> means;
  for (std::size_t b = 0; b < num_bins; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    CalibrationBin bin;
    bin.count = size;
    bin.bin_start = s1_scores[order[at]];
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) sum += metric_values[order[at + i]];
    bin.mean_metric = sum / static_cast<double>(size);
    at += size;
    starts.push_back(bin.bin_start);
    means.push_back(bin.mean_metric);
    report.bins.push_back(bin);
  }

  for (std::size_t b = 1; b < starts.size(); ++b) {
    if (!(starts[b] > starts[b - 1])) {
      throw std::domain_error(
          "binned_calibration: bin starts are not strictly increasing (too many tied scores)");
    }
  }

  report.pearson_r = pearson_r(starts, means);
  report.pearson_r_unbinned = pearson_r(s1_scores, metric_values);
  return report;
}

}  // namespace pearl::eval
