// Command-line surface over the pipeline commands. Exit codes: 0 success,
// 1 usage or configuration error, 2 data validation error, 3 backend error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pearl/commands.hpp"
#include "pearl/config.hpp"
#include "pearl/error.hpp"
#include "pearl/io.hpp"

namespace {

using pearl::cli::RunConfig;

RunConfig load_config(const std::string& path, const std::string& retriever_override) {
  RunConfig cfg = RunConfig::from_file(path);
  if (!retriever_override.empty()) {
    cfg.retriever_kind = retriever_override;
    cfg.finalize();
  }
  return cfg;
}

int dispatch(const std::string& command, const std::string& config_path,
             const std::string& retriever_override, const std::string& user_id,
             const std::string& request_text, const std::string& run_path,
             const std::string& dev_stage1, const std::string& dev_revised,
             const std::string& test_stage1, const std::string& test_revised) {
  const RunConfig cfg = load_config(config_path, retriever_override);

  if (command == "ingest") {
    const auto report = pearl::cli::cmd_ingest(cfg);
    std::cout << report.summary;
    return 0;
  }
  if (command == "build-trainset") {
    const auto artifacts = pearl::cli::cmd_build_trainset(cfg);
    std::cout << "trainset: " << artifacts.trainset_path << " (" << artifacts.group_count
              << " groups";
    if (artifacts.skipped_groups > 0) {
      std::cout << ", " << artifacts.skipped_groups << " skipped for lack of negatives";
    }
    std::cout << ")\n";
    std::cout << "auxlm model: " << artifacts.auxlm_path << '\n';
    std::cout << "candidates: " << artifacts.candidates_path << '\n';
    std::cout << "requests: " << artifacts.requests_path << '\n';
    return 0;
  }
  if (command == "train") {
    std::cout << "scorer model: " << pearl::cli::cmd_train(cfg) << '\n';
    return 0;
  }
  if (command == "rank") {
    const auto ranked = pearl::cli::cmd_rank(cfg, user_id, request_text);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      std::cout << (i + 1) << '\t' << ranked[i].doc_id << '\t'
                << pearl::io::format_double(ranked[i].score) << '\n';
    }
    return 0;
  }
  if (command == "generate") {
    std::cout << "run: " << pearl::cli::cmd_generate(cfg) << '\n';
    return 0;
  }
  if (command == "evaluate") {
    const auto summary = pearl::cli::cmd_evaluate(cfg, run_path);
    std::cout << pearl::io::read_file(summary.summary_path);
    std::cout << "per-instance: " << summary.per_instance_path << '\n';
    return 0;
  }
  if (command == "calibrate") {
    const auto report = pearl::cli::cmd_calibrate(cfg, run_path);
    std::cout << "metric: " << report.metric_name << '\n';
    std::cout << "pearson_r_binned: " << pearl::io::format_double(report.pearson_r) << '\n';
    std::cout << "pearson_r_unbinned: " << pearl::io::format_double(report.pearson_r_unbinned)
              << '\n';
    return 0;
  }
  if (command == "route") {
    const auto report =
        pearl::cli::cmd_route(cfg, dev_stage1, dev_revised, test_stage1, test_revised);
    std::cout << pearl::io::read_file(report.report_path);
    std::cout << "decisions: " << report.decisions_path << '\n';
    return 0;
  }
  throw pearl::ConfigError("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalized retrieval-augmented generation pipeline"};
  app.set_version_flag("--version", PEARL_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string retriever_override;
  std::string user_id;
  std::string request_text;
  std::string run_path;
  std::string dev_stage1;
  std::string dev_revised;
  std::string test_stage1;
  std::string test_revised;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat key=value configuration file")->required();
  };

  add_common(app.add_subcommand("ingest", "Validate a corpus and report statistics"));
  add_common(app.add_subcommand("build-trainset",
                                "Score pairs, select requests, and write training groups"));
  add_common(app.add_subcommand("train", "Train the cross-scorer on the training groups"));

  auto* rank = app.add_subcommand("rank", "Rank one user's documents for a request");
  add_common(rank);
  rank->add_option("--user", user_id, "User id")->required();
  rank->add_option("--request", request_text, "Request text")->required();
  rank->add_option("--retriever", retriever_override,
                   "Retrieval strategy: pearl|bm25|random|dense|ql");

  auto* generate = app.add_subcommand("generate", "Retrieve, prompt, and generate per request");
  add_common(generate);
  generate->add_option("--retriever", retriever_override,
                       "Retrieval strategy: pearl|bm25|random|dense|ql");

  auto* evaluate = app.add_subcommand("evaluate", "Reference-based metrics over a run file");
  add_common(evaluate);
  evaluate->add_option("--run", run_path, "Generation-run JSONL")->required();

  auto* calibrate = app.add_subcommand("calibrate", "Score/metric calibration over a run file");
  add_common(calibrate);
  calibrate->add_option("--run", run_path, "Generation-run JSONL")->required();

  auto* route = app.add_subcommand("route", "Learn a revision threshold and apply it");
  add_common(route);
  route->add_option("--dev-stage1", dev_stage1, "Dev stage-1 run")->required();
  route->add_option("--dev-revised", dev_revised, "Dev fully-revised run")->required();
  route->add_option("--test-stage1", test_stage1, "Test stage-1 run")->required();
  route->add_option("--test-revised", test_revised, "Test fully-revised run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), config_path, retriever_override,
                    user_id, request_text, run_path, dev_stage1, dev_revised, test_stage1,
                    test_revised);
  } catch (const pearl::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const pearl::BackendError& e) {
    std::cerr << "backend error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    // ParseError, ValidationError, domain errors: bad data.
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  }
}
