#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pearl/config.hpp"
#include "pearl/eval.hpp"
#include "pearl/ranking.hpp"

namespace pearl::cli {

// Pipeline commands behind the CLI. Every output is written atomically and
// stamped with the config hash and seed; no command mutates its inputs.

struct IngestReport {
  std::size_t users = 0;
  std::size_t documents = 0;
  std::size_t requests = 0;
  bool timestamps = false;  // all documents carry timestamps
  std::string summary;      // printable report
};
IngestReport cmd_ingest(const RunConfig& config);

struct TrainsetArtifacts {
  std::string trainset_path;
  std::string auxlm_path;
  std::string candidates_path;
  std::string requests_path;
  std::size_t group_count = 0;
  std::size_t skipped_groups = 0;
};
// Filter -> partition -> synthetic or provided requests -> auxiliary model ->
// benefit scores -> request selection -> training groups.
TrainsetArtifacts cmd_build_trainset(const RunConfig& config);

// Trains the cross-scorer on <out.dir>/trainset.jsonl and writes
// <out.dir>/scorer.model; returns the model path.
std::string cmd_train(const RunConfig& config);

// Ranks one user's documents for a request under the configured retriever.
std::vector<ScoredDoc> cmd_rank(const RunConfig& config, const std::string& user_id,
                                const std::string& request_text);

// Runs retrieval + prompting + the configured backend over the request file;
// writes a generation-run JSONL and returns its path.
std::string cmd_generate(const RunConfig& config);

struct EvalSummary {
  std::size_t count = 0;
  double r1_precision = 0.0;
  double r1_recall = 0.0;
  double r1_f1 = 0.0;
  double r2_precision = 0.0;
  double r2_recall = 0.0;
  double r2_f1 = 0.0;
  std::optional<double> macro_f1;  // unset when no reference carries a stance
  std::string per_instance_path;
  std::string summary_path;
};
EvalSummary cmd_evaluate(const RunConfig& config, const std::string& run_path);

eval::CalibrationReport cmd_calibrate(const RunConfig& config, const std::string& run_path);

struct RouteReport {
  double theta = 0.0;
  double dev_metric = 0.0;
  double dev_revised_fraction = 0.0;
  double test_revised_fraction = 0.0;
  double test_metric_stage1 = 0.0;
  double test_metric_selective = 0.0;
  double test_metric_all_revised = 0.0;
  std::size_t test_count = 0;
  std::string decisions_path;
  std::string report_path;
};
// Learns the revision threshold on the dev runs (stage-1 + fully revised)
// and applies it to the test runs; all texts are precomputed so no backend
// call happens here.
RouteReport cmd_route(const RunConfig& config, const std::string& dev_stage1_path,
                      const std::string& dev_revised_path, const std::string& test_stage1_path,
                      const std::string& test_revised_path);

}  // namespace pearl::cli
