#include "pearl/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "pearl/auxlm.hpp"
#include "pearl/baselines.hpp"
#include "pearl/corpus.hpp"
#include "pearl/error.hpp"
#include "pearl/genpipe.hpp"
#include "pearl/io.hpp"
#include "pearl/retriever.hpp"
#include "pearl/rng.hpp"
#include "pearl/route.hpp"
#include "pearl/text.hpp"
#include "pearl/trainsel.hpp"

namespace pearl::cli {

using nlohmann::json;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/" + name;
}

io::RunStamp stamp_of(const RunConfig& cfg) {
  return io::RunStamp{cfg.hash(), cfg.seed};
}

std::string run_stem(const std::string& run_path) {
  return std::filesystem::path(run_path).stem().string();
}

void require_file(const std::string& path, const std::string& hint) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError(path + " not found; " + hint);
  }
}

corpus::PartitionMode resolve_mode(const RunConfig& cfg, const corpus::UserHistory& history) {
  if (cfg.partition_mode == "temporal") return corpus::PartitionMode::Temporal;
  if (cfg.partition_mode == "random") return corpus::PartitionMode::Random;
  const bool all_ts = std::all_of(history.documents.begin(), history.documents.end(),
                                  [](const corpus::Document& d) { return d.timestamp.has_value(); });
  return all_ts ? corpus::PartitionMode::Temporal : corpus::PartitionMode::Random;
}

std::unique_ptr<genpipe::Backend> make_backend(const RunConfig& cfg) {
  if (cfg.backend_kind == "stub-copy") {
    return std::make_unique<genpipe::StubBackend>(genpipe::StubMode::CopyTopExample);
  }
  if (cfg.backend_kind == "stub-blend") {
    return std::make_unique<genpipe::StubBackend>(genpipe::StubMode::Blend);
  }
  genpipe::HttpBackendConfig http;
  http.url = cfg.backend_url;
  http.auth_token = cfg.backend_token;
  http.timeout_ms = cfg.backend_timeout_ms;
  http.attempts = cfg.backend_attempts;
  http.max_inflight = cfg.backend_max_inflight;
  return std::make_unique<genpipe::HttpBackend>(std::move(http));
}

// Retrieval dispatch shared by cmd_rank and cmd_generate.
struct Ranker {
  std::string kind;
  std::optional<retriever::CrossScorer> scorer;
  std::optional<auxlm::NGramModel> aux;
  double cache_lambda = 0.3;
  std::uint64_t seed = 0;

  std::vector<ScoredDoc> rank(const std::string& request_id, const std::string& request_text,
                              const std::vector<corpus::Document>& docs) const {
    if (kind == "pearl") return retriever::rank(*scorer, request_text, docs);
    if (kind == "bm25") {
      baselines::Bm25Params params;
      params.stats = CorpusStats::build(docs);
      return baselines::bm25_rank(params, request_text, docs);
    }
    if (kind == "dense") {
      return baselines::dense_cosine_rank(request_text, docs, CorpusStats::build(docs));
    }
    if (kind == "ql") return baselines::ql_rank(*aux, request_text, docs, cache_lambda);
    return baselines::random_rank(docs, sub_seed(seed, "random-rank:" + request_id));
  }
};

Ranker make_ranker(const RunConfig& cfg) {
  Ranker ranker;
  ranker.kind = cfg.retriever_kind;
  ranker.cache_lambda = cfg.cache_lambda;
  ranker.seed = cfg.seed;
  if (cfg.retriever_kind == "pearl") {
    const auto path = out_path(cfg, "scorer.model");
    require_file(path, "run the train command first");
    ranker.scorer = retriever::CrossScorer::load(path);
  } else if (cfg.retriever_kind == "ql") {
    const auto path = out_path(cfg, "auxlm.model");
    require_file(path, "run the build-trainset command first");
    ranker.aux = auxlm::NGramModel::load(path);
  }
  return ranker;
}

const corpus::UserHistory& user_history(const std::vector<corpus::UserHistory>& histories,
                                        const std::string& user_id, const std::string& who) {
  for (const auto& h : histories) {
    if (h.user_id == user_id) {
      if (h.documents.empty()) {
        throw ValidationError(who + ": user '" + user_id + "' has no documents");
      }
      return h;
    }
  }
  throw ValidationError(who + ": unknown user '" + user_id + "'");
}

std::vector<corpus::Document> top_k_documents(const std::vector<ScoredDoc>& ranked,
                                              const std::vector<corpus::Document>& docs,
                                              std::size_t k) {
  std::map<std::string, const corpus::Document*> by_id;
  for (const auto& d : docs) by_id[d.doc_id] = &d;
  std::vector<corpus::Document> top;
  for (const auto& sd : ranked) {
    if (top.size() >= k) break;
    top.push_back(*by_id.at(sd.doc_id));
  }
  return top;
}

double stance_match_value(const std::string& output, const std::string& reference) {
  return eval::stance_label(output) == eval::stance_label(reference) ? 1.0 : 0.0;
}

struct JoinedRuns {
  std::vector<route::DevRecord> records;
  std::vector<std::string> request_ids;  // aligned with records
};

JoinedRuns join_runs(const std::string& stage1_path, const std::string& revised_path) {
  const auto stage1 = genpipe::load_run(stage1_path);
  const auto revised = genpipe::load_run(revised_path);
  std::map<std::string, const genpipe::GenerationRecord*> revised_by_id;
  for (const auto& rec : revised) revised_by_id[rec.request_id] = &rec;

  JoinedRuns joined;
  joined.records.reserve(stage1.size());
  for (const auto& rec : stage1) {
    const auto it = revised_by_id.find(rec.request_id);
    if (it == revised_by_id.end()) {
      throw ValidationError("route: request '" + rec.request_id + "' present in " + stage1_path +
                            " but missing from " + revised_path);
    }
    if (!rec.reference_text) {
      throw ValidationError("route: request '" + rec.request_id + "' has no reference_text");
    }
    joined.records.push_back(route::DevRecord{rec.s1, rec.output_text, it->second->output_text,
                                              *rec.reference_text});
    joined.request_ids.push_back(rec.request_id);
  }
  if (joined.records.empty()) throw ValidationError("route: empty run file " + stage1_path);
  return joined;
}

}  // namespace

IngestReport cmd_ingest(const RunConfig& cfg) {
  if (cfg.corpus_path.empty()) throw ConfigError("corpus.path is required");
  const auto histories = corpus::load_corpus(cfg.corpus_path);

  IngestReport report;
  report.users = histories.size();
  std::size_t with_ts = 0;
  std::size_t min_docs = std::numeric_limits<std::size_t>::max();
  std::size_t max_docs = 0;
  for (const auto& h : histories) {
    report.documents += h.documents.size();
    min_docs = std::min(min_docs, h.documents.size());
    max_docs = std::max(max_docs, h.documents.size());
    if (std::all_of(h.documents.begin(), h.documents.end(),
                    [](const corpus::Document& d) { return d.timestamp.has_value(); })) {
      ++with_ts;
    }
  }
  report.timestamps = with_ts == histories.size() && !histories.empty();

  std::size_t unknown_users = 0;
  if (!cfg.requests_path.empty()) {
    const auto requests = corpus::load_requests(cfg.requests_path);
    report.requests = requests.size();
    for (const auto& req : requests) {
      const bool known = std::any_of(histories.begin(), histories.end(),
                                     [&](const corpus::UserHistory& h) {
                                       return h.user_id == req.user_id;
                                     });
      if (!known) ++unknown_users;
    }
  }

  std::ostringstream ss;
  ss << "corpus: " << cfg.corpus_path << '\n';
  ss << "users: " << report.users << '\n';
  ss << "documents: " << report.documents << '\n';
  if (!histories.empty()) {
    ss << "docs per user: min " << min_docs << ", max " << max_docs << ", mean "
       << io::format_double(static_cast<double>(report.documents) /
                            static_cast<double>(report.users))
       << '\n';
  }
  ss << "timestamps: " << (report.timestamps ? "all users" : "incomplete") << " (" << with_ts
     << "/" << report.users << " users fully stamped)\n";
  if (!cfg.requests_path.empty()) {
    ss << "requests: " << report.requests << " (" << unknown_users << " with unknown users)\n";
  }
  ss << "validation: ok\n";
  report.summary = ss.str();
  return report;
}

TrainsetArtifacts cmd_build_trainset(const RunConfig& cfg) {
  if (cfg.corpus_path.empty()) throw ConfigError("corpus.path is required");
  const auto stamp = stamp_of(cfg);

  const auto raw = corpus::load_corpus(cfg.corpus_path);
  const auto filtered = corpus::filter_corpus(raw, cfg.min_words, cfg.min_docs);
  if (filtered.empty()) {
    throw ValidationError("build-trainset: no users left after filtering");
  }

  std::vector<corpus::UserHistory> candidates;
  std::vector<corpus::Document> all_targets;
  for (const auto& history : filtered) {
    if (history.documents.size() < 2) continue;  // cannot split a single document
    const auto part =
        corpus::partition_history(history, resolve_mode(cfg, history), cfg.target_fraction,
                                  sub_seed(cfg.seed, "partition:" + history.user_id));
    candidates.push_back(corpus::UserHistory{history.user_id, part.candidates});
    all_targets.insert(all_targets.end(), part.targets.begin(), part.targets.end());
  }
  if (candidates.empty()) {
    throw ValidationError("build-trainset: no user has enough documents to partition");
  }

  std::vector<corpus::RequestTarget> requests;
  if (!cfg.requests_path.empty()) {
    requests = corpus::load_requests(cfg.requests_path);
    for (const auto& req : requests) {
      if (!req.target_text) {
        throw ValidationError("build-trainset: request '" + req.request_id +
                              "' has no target_text");
      }
    }
  } else {
    requests = corpus::generate_synthetic_requests(all_targets, sub_seed(cfg.seed, "requests"));
  }

  std::vector<std::string> candidate_texts;
  for (const auto& user : candidates) {
    for (const auto& doc : user.documents) candidate_texts.push_back(doc.text);
  }
  auto model = auxlm::train_ngram(candidate_texts, cfg.ngram_order, cfg.smoothing_k);
  model.stamp = stamp;

  // Fixed few-shot background for the no-document likelihood, sampled once
  // per run from the candidate pool.
  SplitMix64 fewshot_rng(sub_seed(cfg.seed, "fewshot"));
  const auto picks = fewshot_rng.sample_indices(candidate_texts.size(),
                                                static_cast<std::size_t>(cfg.fewshot_size));
  std::vector<std::string> fewshot;
  for (const auto i : picks) fewshot.push_back(candidate_texts[i]);

  const auto scores =
      trainsel::score_all_pairs(model, candidates, requests, fewshot, cfg.cache_lambda);
  const auto selected = trainsel::select_requests(scores, requests, cfg.top_fraction);

  trainsel::SelectionConfig sel;
  sel.top_fraction = cfg.top_fraction;
  sel.positives_per_request = cfg.positives_per_request;
  sel.negatives_per_positive = cfg.negatives_per_positive;
  sel.seed = sub_seed(cfg.seed, "negatives");
  const auto built = trainsel::build_groups(scores, selected, candidates, sel);

  TrainsetArtifacts artifacts;
  artifacts.trainset_path = out_path(cfg, "trainset.jsonl");
  artifacts.auxlm_path = out_path(cfg, "auxlm.model");
  artifacts.candidates_path = out_path(cfg, "candidates.jsonl");
  artifacts.requests_path = out_path(cfg, "requests.jsonl");
  artifacts.group_count = built.groups.size();
  artifacts.skipped_groups = built.skipped;

  trainsel::save_groups(built.groups, artifacts.trainset_path, stamp);
  model.save(artifacts.auxlm_path);
  corpus::save_corpus(candidates, artifacts.candidates_path);
  corpus::save_requests(requests, artifacts.requests_path);
  return artifacts;
}

std::string cmd_train(const RunConfig& cfg) {
  const auto trainset = out_path(cfg, "trainset.jsonl");
  require_file(trainset, "run the build-trainset command first");
  const auto groups = trainsel::load_groups(trainset);

  retriever::TrainConfig train_cfg;
  train_cfg.tau = cfg.tau;
  train_cfg.anchor_from_median = cfg.anchor_mode == "median";
  train_cfg.anchor_y0 = cfg.anchor_y0;
  train_cfg.learning_rate = cfg.learning_rate;
  train_cfg.epochs = cfg.epochs;
  train_cfg.seed = cfg.seed;
  train_cfg.scale_calibrated = cfg.objective == "calibrated";

  auto result = retriever::train(groups, train_cfg);
  result.scorer.stamp = stamp_of(cfg);
  const auto path = out_path(cfg, "scorer.model");
  result.scorer.save(path);
  return path;
}

std::vector<ScoredDoc> cmd_rank(const RunConfig& cfg, const std::string& user_id,
                                const std::string& request_text) {
  const auto pool_path = cfg.generate_corpus.empty() ? cfg.corpus_path : cfg.generate_corpus;
  if (pool_path.empty()) throw ConfigError("corpus.path is required");
  if (text::trim(request_text).empty()) throw ConfigError("rank: request text is empty");
  const auto histories = corpus::load_corpus(pool_path);
  const auto& user = user_history(histories, user_id, "rank");
  return make_ranker(cfg).rank("adhoc", request_text, user.documents);
}

std::string cmd_generate(const RunConfig& cfg) {
  const auto pool_path = cfg.generate_corpus.empty() ? cfg.corpus_path : cfg.generate_corpus;
  if (pool_path.empty()) throw ConfigError("corpus.path is required");
  std::string requests_path = cfg.generate_requests;
  if (requests_path.empty()) requests_path = cfg.requests_path;
  if (requests_path.empty()) requests_path = out_path(cfg, "requests.jsonl");
  require_file(requests_path, "set requests.path or run build-trainset first");

  const auto histories = corpus::load_corpus(pool_path);
  const auto requests = corpus::load_requests(requests_path);
  const auto ranker = make_ranker(cfg);
  const auto backend = make_backend(cfg);
  const auto gen_tmpl = genpipe::PromptTemplate::generation_default();
  const auto rev_tmpl = genpipe::PromptTemplate::revision_default();

  std::vector<genpipe::GenerationRecord> records;
  records.reserve(requests.size());
  for (const auto& req : requests) {
    const auto& user = user_history(histories, req.user_id, "generate");
    const auto ranked = ranker.rank(req.request_id, req.request_text, user.documents);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(cfg.k), ranked.size());
    const auto top = top_k_documents(ranked, user.documents, k);

    genpipe::GenerationRecord rec;
    rec.request_id = req.request_id;
    rec.user_id = req.user_id;
    rec.retrieved.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k));
    rec.s1 = ranked.front().score;
    rec.backend = backend->name();
    rec.temperature = cfg.temperature;
    rec.reference_text = req.target_text;

    const auto prompt = genpipe::build_prompt(gen_tmpl, req.request_text, top);
    const auto draft = genpipe::generate(*backend, prompt, cfg.temperature, cfg.max_words);
    if (cfg.revise_all) {
      const auto revision_prompt =
          genpipe::build_revision_prompt(rev_tmpl, req.request_text, draft, top);
      const auto reply =
          genpipe::generate(*backend, revision_prompt, cfg.temperature, cfg.max_words);
      const auto parsed = genpipe::parse_revision_reply(reply);
      rec.prompt = revision_prompt;
      rec.output_text = parsed.text;
      rec.marker_found = parsed.marker_found;
      rec.revised = true;
      rec.stage1_text = draft;
    } else {
      rec.prompt = prompt;
      rec.output_text = draft;
    }
    records.push_back(std::move(rec));
  }

  const auto path = cfg.generate_out.empty() ? out_path(cfg, "run.jsonl") : cfg.generate_out;
  genpipe::save_run(records, path, stamp_of(cfg));
  return path;
}

EvalSummary cmd_evaluate(const RunConfig& cfg, const std::string& run_path) {
  const auto records = genpipe::load_run(run_path);
  if (records.empty()) throw ValidationError("evaluate: empty run file " + run_path);

  EvalSummary summary;
  summary.count = records.size();
  std::string per_instance;
  std::vector<eval::StanceLabel> predicted;
  std::vector<eval::StanceLabel> gold;

  for (const auto& rec : records) {
    if (!rec.reference_text) {
      throw ValidationError("evaluate: request '" + rec.request_id + "' has no reference_text");
    }
    const auto r1 = eval::rouge_n(rec.output_text, *rec.reference_text, 1);
    const auto r2 = eval::rouge_n(rec.output_text, *rec.reference_text, 2);
    const auto pred_label = eval::stance_label(rec.output_text);
    const auto gold_label = eval::stance_label(*rec.reference_text);
    if (gold_label != eval::StanceLabel::UNK) {
      predicted.push_back(pred_label);
      gold.push_back(gold_label);
    }

    summary.r1_precision += r1.precision;
    summary.r1_recall += r1.recall;
    summary.r1_f1 += r1.f1;
    summary.r2_precision += r2.precision;
    summary.r2_recall += r2.recall;
    summary.r2_f1 += r2.f1;

    json j;
    j["request_id"] = rec.request_id;
    j["r1"] = {{"p", r1.precision}, {"r", r1.recall}, {"f1", r1.f1}};
    j["r2"] = {{"p", r2.precision}, {"r", r2.recall}, {"f1", r2.f1}};
    j["stance_pred"] = eval::to_string(pred_label);
    j["stance_gold"] = eval::to_string(gold_label);
    j["bs_f1"] = nullptr;  // reserved for an embedding-based metric
    per_instance += j.dump();
    per_instance += '\n';
  }

  const auto n = static_cast<double>(records.size());
  summary.r1_precision /= n;
  summary.r1_recall /= n;
  summary.r1_f1 /= n;
  summary.r2_precision /= n;
  summary.r2_recall /= n;
  summary.r2_f1 /= n;
  if (!gold.empty()) summary.macro_f1 = eval::macro_f1(predicted, gold);

  const auto stem = run_stem(run_path);
  summary.per_instance_path = out_path(cfg, stem + "_eval.jsonl");
  summary.summary_path = out_path(cfg, stem + "_eval_summary.txt");

  {
    json header;
    header["kind"] = "evaluation";
    header["config_hash"] = cfg.hash();
    header["seed"] = cfg.seed;
    io::atomic_write(summary.per_instance_path, header.dump() + "\n" + per_instance);
  }
  {
    std::ostringstream ss;
    ss << "run: " << run_path << '\n';
    ss << "config_hash: " << cfg.hash() << '\n';
    ss << "seed: " << cfg.seed << '\n';
    ss << "instances: " << summary.count << '\n';
    ss << "rouge1: p " << io::format_double(summary.r1_precision) << ", r "
       << io::format_double(summary.r1_recall) << ", f1 " << io::format_double(summary.r1_f1)
       << '\n';
    ss << "rouge2: p " << io::format_double(summary.r2_precision) << ", r "
       << io::format_double(summary.r2_recall) << ", f1 " << io::format_double(summary.r2_f1)
       << '\n';
    if (summary.macro_f1) {
      ss << "macro_f1: " << io::format_double(*summary.macro_f1) << " (" << gold.size()
         << " labeled references)\n";
    } else {
      ss << "macro_f1: n/a (no labeled references)\n";
    }
    ss << "bs_f1: n/a (reserved)\n";
    io::atomic_write(summary.summary_path, ss.str());
  }
  return summary;
}

eval::CalibrationReport cmd_calibrate(const RunConfig& cfg, const std::string& run_path) {
  const auto records = genpipe::load_run(run_path);
  if (records.empty()) throw ValidationError("calibrate: empty run file " + run_path);

  std::vector<double> s1_values;
  std::vector<double> metric_values;
  for (const auto& rec : records) {
    if (!rec.reference_text) {
      throw ValidationError("calibrate: request '" + rec.request_id + "' has no reference_text");
    }
    double value = 0.0;
    if (cfg.eval_metric == "r1") {
      value = eval::rouge_n(rec.output_text, *rec.reference_text, 1).f1;
    } else if (cfg.eval_metric == "r2") {
      value = eval::rouge_n(rec.output_text, *rec.reference_text, 2).f1;
    } else {
      if (eval::stance_label(*rec.reference_text) == eval::StanceLabel::UNK) continue;
      value = stance_match_value(rec.output_text, *rec.reference_text);
    }
    s1_values.push_back(rec.s1);
    metric_values.push_back(value);
  }

  auto report = eval::binned_calibration(s1_values, metric_values, cfg.num_bins, cfg.eval_metric);

  std::ostringstream ss;
  ss << "run: " << run_path << '\n';
  ss << "config_hash: " << cfg.hash() << '\n';
  ss << "seed: " << cfg.seed << '\n';
  ss << "metric: " << report.metric_name << '\n';
  ss << "pearson_r_binned: " << io::format_double(report.pearson_r) << '\n';
  ss << "pearson_r_unbinned: " << io::format_double(report.pearson_r_unbinned) << '\n';
  ss << "bins (start, mean, count):\n";
  for (const auto& bin : report.bins) {
    ss << "  " << io::format_double(bin.bin_start) << ' ' << io::format_double(bin.mean_metric)
       << ' ' << bin.count << '\n';
  }
  io::atomic_write(out_path(cfg, run_stem(run_path) + "_calibration.txt"), ss.str());
  return report;
}

RouteReport cmd_route(const RunConfig& cfg, const std::string& dev_stage1_path,
                      const std::string& dev_revised_path, const std::string& test_stage1_path,
                      const std::string& test_revised_path) {
  const auto metric =
      cfg.route_metric == "r2" ? route::RouteMetric::Rouge2 : route::RouteMetric::MacroF1;
  const auto dev = join_runs(dev_stage1_path, dev_revised_path);
  const auto joined_test = join_runs(test_stage1_path, test_revised_path);
  const auto& test = joined_test.records;

  const auto threshold = route::learn_threshold(dev.records, metric);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  RouteReport report;
  report.theta = threshold.theta;
  report.dev_metric = threshold.dev_metric_at_theta;
  report.dev_revised_fraction = threshold.revised_fraction;
  report.test_count = test.size();
  report.test_metric_stage1 = route::routed_metric(test, -kInf, metric);
  report.test_metric_selective = route::routed_metric(test, threshold.theta, metric);
  report.test_metric_all_revised = route::routed_metric(test, kInf, metric);

  std::size_t revised = 0;
  std::string decisions;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& rec = test[i];
    const bool revise = rec.s1 < threshold.theta;
    if (revise) ++revised;
    const auto& final_text = revise ? rec.revised_text : rec.stage1_text;

    json j;
    j["request_id"] = joined_test.request_ids[i];
    j["s1"] = rec.s1;
    j["theta"] = threshold.theta;
    j["revised"] = revise;
    if (metric == route::RouteMetric::Rouge2) {
      j["metric_stage1"] = eval::rouge_n(rec.stage1_text, rec.reference, 2).f1;
      j["metric_final"] = eval::rouge_n(final_text, rec.reference, 2).f1;
    } else {
      j["label_stage1"] = eval::to_string(eval::stance_label(rec.stage1_text));
      j["label_final"] = eval::to_string(eval::stance_label(final_text));
      j["label_gold"] = eval::to_string(eval::stance_label(rec.reference));
    }
    decisions += j.dump();
    decisions += '\n';
  }
  report.test_revised_fraction = static_cast<double>(revised) / static_cast<double>(test.size());

  report.decisions_path = out_path(cfg, run_stem(test_stage1_path) + "_routing.jsonl");
  report.report_path = out_path(cfg, run_stem(test_stage1_path) + "_routing_report.txt");

  {
    json header;
    header["kind"] = "routing";
    header["config_hash"] = cfg.hash();
    header["seed"] = cfg.seed;
    io::atomic_write(report.decisions_path, header.dump() + "\n" + decisions);
  }
  {
    std::ostringstream ss;
    ss << "metric: " << cfg.route_metric << '\n';
    ss << "theta: " << io::format_double(report.theta) << '\n';
    ss << "dev_metric_at_theta: " << io::format_double(report.dev_metric) << '\n';
    ss << "dev_revised_fraction: " << io::format_double(report.dev_revised_fraction) << '\n';
    ss << "test_revised_fraction: " << io::format_double(report.test_revised_fraction) << '\n';
    ss << "test_metric_no_revision: " << io::format_double(report.test_metric_stage1) << '\n';
    ss << "test_metric_selective: " << io::format_double(report.test_metric_selective) << '\n';
    ss << "test_metric_all_revision: " << io::format_double(report.test_metric_all_revised)
       << '\n';
    io::atomic_write(report.report_path, ss.str());
  }
  return report;
}

}  // namespace pearl::cli
