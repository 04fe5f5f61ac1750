#pragma once

#include <cstdint>
#include <string>

namespace pearl::cli {

// Every knob of a pipeline run. Defaults are the working defaults of the
// system (p=2, n=3, tau=5, top_fraction=2/3, k=3, temperature=0). All
// randomness flows from `seed` through named sub-seeds, so stages are
// independently reproducible.
struct RunConfig {
  std::uint64_t seed = 7;

  std::string corpus_path;    // corpus.path
  std::string requests_path;  // requests.path ("" = synthesize from targets)
  std::string out_dir = "out";

  // filter
  std::size_t min_words = 10;  // keep documents with more than this many words
  std::size_t min_docs = 5;

  // partition
  std::string partition_mode = "auto";  // auto|temporal|random
  double target_fraction = 0.2;

  // auxlm
  int ngram_order = 3;
  double smoothing_k = 0.1;
  double cache_lambda = 0.3;
  int fewshot_size = 4;

  // selection
  double top_fraction = 2.0 / 3.0;
  int positives_per_request = 2;   // p
  int negatives_per_positive = 3;  // n

  // training
  double tau = 5.0;
  std::string anchor_mode = "median";  // median|fixed
  double anchor_y0 = 0.0;
  double learning_rate = 0.05;
  int epochs = 30;
  std::string objective = "calibrated";  // calibrated|standard

  // retrieval
  int k = 3;
  std::string retriever_kind = "pearl";  // pearl|bm25|random|dense|ql

  // backend
  std::string backend_kind = "stub-copy";  // stub-copy|stub-blend|http
  std::string backend_url;
  std::string backend_token;  // secret; env override, excluded from hashes
  int backend_timeout_ms = 30000;
  int backend_attempts = 3;
  int backend_max_inflight = 4;

  // generation
  double temperature = 0.0;
  std::size_t max_words = 300;
  bool revise_all = false;
  std::string generate_corpus;    // generate.corpus ("" = corpus.path)
  std::string generate_requests;  // generate.requests ("" = derived)
  std::string generate_out;       // generate.out ("" = <out.dir>/run.jsonl)

  // eval
  std::string eval_metric = "r2";  // r1|r2|stance
  std::size_t num_bins = 10;

  // route
  std::string route_metric = "r2";  // r2|stance

  // Parses a flat "key = value" file ('#' starts a comment). Unknown keys are
  // rejected. PEARL_BACKEND_URL and PEARL_BACKEND_TOKEN environment variables
  // override the corresponding keys afterwards.
  static RunConfig from_file(const std::string& path);

  // Applies validation and env overrides to an in-memory config.
  void finalize();

  // Canonical "key = value" rendering of every field, sorted, secrets
  // excluded. Equal canonical forms mean identical configurations.
  std::string canonical() const;

  // FNV-1a hash of canonical(), as fixed-width hex.
  std::string hash() const;
};

}  // namespace pearl::cli
