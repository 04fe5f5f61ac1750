#include "pearl/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>

#include "pearl/error.hpp"
#include "pearl/io.hpp"
#include "pearl/rng.hpp"
#include "pearl/text.hpp"

namespace pearl::cli {

namespace {

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const auto out = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected unsigned integer, got '" + v + "'");
  }
}

int parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const auto out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
  }
}

double parse_real(const std::string& v, const std::string& key) {
  // Fractions like 2/3 are accepted so paper-style constants read naturally.
  const auto slash = v.find('/');
  try {
    if (slash != std::string::npos) {
      return io::parse_double(v.substr(0, slash)) / io::parse_double(v.substr(slash + 1));
    }
    return io::parse_double(v);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected boolean, got '" + v + "'");
}

void check_choice(const std::string& v, std::initializer_list<const char*> allowed,
                  const std::string& key) {
  for (const char* a : allowed) {
    if (v == a) return;
  }
  std::string msg = "config key '" + key + "': '" + v + "' is not one of {";
  bool first = true;
  for (const char* a : allowed) {
    if (!first) msg += ", ";
    msg += a;
    first = false;
  }
  throw ConfigError(msg + "}");
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  RunConfig cfg;
  std::map<std::string, std::function<void(const std::string&)>> setters;
  const auto set_str = [](std::string& field) {
    return [&field](const std::string& v) { field = v; };
  };

  setters["seed"] = [&](const std::string& v) { cfg.seed = parse_u64(v, "seed"); };
  setters["corpus.path"] = set_str(cfg.corpus_path);
  setters["requests.path"] = set_str(cfg.requests_path);
  setters["out.dir"] = set_str(cfg.out_dir);
  setters["filter.min_words"] = [&](const std::string& v) {
    cfg.min_words = parse_u64(v, "filter.min_words");
  };
  setters["filter.min_docs"] = [&](const std::string& v) {
    cfg.min_docs = parse_u64(v, "filter.min_docs");
  };
  setters["partition.mode"] = set_str(cfg.partition_mode);
  setters["partition.target_fraction"] = [&](const std::string& v) {
    cfg.target_fraction = parse_real(v, "partition.target_fraction");
  };
  setters["auxlm.order"] = [&](const std::string& v) {
    cfg.ngram_order = parse_int(v, "auxlm.order");
  };
  setters["auxlm.smoothing_k"] = [&](const std::string& v) {
    cfg.smoothing_k = parse_real(v, "auxlm.smoothing_k");
  };
  setters["auxlm.cache_lambda"] = [&](const std::string& v) {
    cfg.cache_lambda = parse_real(v, "auxlm.cache_lambda");
  };
  setters["auxlm.fewshot"] = [&](const std::string& v) {
    cfg.fewshot_size = parse_int(v, "auxlm.fewshot");
  };
  setters["select.top_fraction"] = [&](const std::string& v) {
    cfg.top_fraction = parse_real(v, "select.top_fraction");
  };
  setters["select.positives"] = [&](const std::string& v) {
    cfg.positives_per_request = parse_int(v, "select.positives");
  };
  setters["select.negatives"] = [&](const std::string& v) {
    cfg.negatives_per_positive = parse_int(v, "select.negatives");
  };
  setters["train.tau"] = [&](const std::string& v) { cfg.tau = parse_real(v, "train.tau"); };
  setters["train.anchor_mode"] = set_str(cfg.anchor_mode);
  setters["train.anchor_y0"] = [&](const std::string& v) {
    cfg.anchor_y0 = parse_real(v, "train.anchor_y0");
  };
  setters["train.learning_rate"] = [&](const std::string& v) {
    cfg.learning_rate = parse_real(v, "train.learning_rate");
  };
  setters["train.epochs"] = [&](const std::string& v) {
    cfg.epochs = parse_int(v, "train.epochs");
  };
  setters["train.objective"] = set_str(cfg.objective);
  setters["retrieve.k"] = [&](const std::string& v) { cfg.k = parse_int(v, "retrieve.k"); };
  setters["retrieve.method"] = set_str(cfg.retriever_kind);
  setters["backend.kind"] = set_str(cfg.backend_kind);
  setters["backend.url"] = set_str(cfg.backend_url);
  setters["backend.token"] = set_str(cfg.backend_token);
  setters["backend.timeout_ms"] = [&](const std::string& v) {
    cfg.backend_timeout_ms = parse_int(v, "backend.timeout_ms");
  };
  setters["backend.attempts"] = [&](const std::string& v) {
    cfg.backend_attempts = parse_int(v, "backend.attempts");
  };
  setters["backend.max_inflight"] = [&](const std::string& v) {
    cfg.backend_max_inflight = parse_int(v, "backend.max_inflight");
  };
  setters["generate.temperature"] = [&](const std::string& v) {
    cfg.temperature = parse_real(v, "generate.temperature");
  };
  setters["generate.max_words"] = [&](const std::string& v) {
    cfg.max_words = parse_u64(v, "generate.max_words");
  };
  setters["generate.revise_all"] = [&](const std::string& v) {
    cfg.revise_all = parse_bool(v, "generate.revise_all");
  };
  setters["generate.corpus"] = set_str(cfg.generate_corpus);
  setters["generate.requests"] = set_str(cfg.generate_requests);
  setters["generate.out"] = set_str(cfg.generate_out);
  setters["eval.metric"] = set_str(cfg.eval_metric);
  setters["eval.num_bins"] = [&](const std::string& v) {
    cfg.num_bins = parse_u64(v, "eval.num_bins");
  };
  setters["route.metric"] = set_str(cfg.route_metric);

  std::vector<std::string> lines;
  try {
    lines = io::read_lines(path);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }

  std::size_t lineno = 0;
  for (const auto& raw : lines) {
    ++lineno;
    std::string line = raw;
    if (const auto hash_pos = line.find('#'); hash_pos != std::string::npos) {
      line.resize(hash_pos);
    }
    line = text::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + " line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = text::trim(line.substr(0, eq));
    const std::string value = text::trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError(path + " line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    it->second(value);
  }

  cfg.finalize();
  return cfg;
}

void RunConfig::finalize() {
  // Secrets (and the endpoint) may come from the environment instead of the
  // config file.
  if (const char* url = std::getenv("PEARL_BACKEND_URL"); url != nullptr && *url != '\0') {
    backend_url = url;
  }
  if (const char* token = std::getenv("PEARL_BACKEND_TOKEN"); token != nullptr && *token != '\0') {
    backend_token = token;
  }

  check_choice(partition_mode, {"auto", "temporal", "random"}, "partition.mode");
  check_choice(anchor_mode, {"median", "fixed"}, "train.anchor_mode");
  check_choice(objective, {"calibrated", "standard"}, "train.objective");
  check_choice(retriever_kind, {"pearl", "bm25", "random", "dense", "ql"}, "retrieve.method");
  check_choice(backend_kind, {"stub-copy", "stub-blend", "http"}, "backend.kind");
  check_choice(eval_metric, {"r1", "r2", "stance"}, "eval.metric");
  check_choice(route_metric, {"r2", "stance"}, "route.metric");

  if (!(target_fraction > 0.0 && target_fraction < 1.0)) {
    throw ConfigError("partition.target_fraction must be in (0,1)");
  }
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw ConfigError("select.top_fraction must be in (0,1]");
  }
  if (positives_per_request < 1 || negatives_per_positive < 1) {
    throw ConfigError("select.positives and select.negatives must be >= 1");
  }
  if (ngram_order < 1) throw ConfigError("auxlm.order must be >= 1");
  if (!(smoothing_k > 0.0)) throw ConfigError("auxlm.smoothing_k must be > 0");
  if (!(cache_lambda >= 0.0 && cache_lambda < 1.0)) {
    throw ConfigError("auxlm.cache_lambda must be in [0,1)");
  }
  if (fewshot_size < 1) throw ConfigError("auxlm.fewshot must be >= 1");
  if (!(tau > 0.0)) throw ConfigError("train.tau must be > 0");
  if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (k < 1 || k > 8) throw ConfigError("retrieve.k must be in [1,8]");
  if (min_docs < 1) throw ConfigError("filter.min_docs must be >= 1");
  if (num_bins < 2) throw ConfigError("eval.num_bins must be >= 2");
  if (max_words < 1) throw ConfigError("generate.max_words must be >= 1");
  if (backend_kind == "http" && backend_url.empty()) {
    throw ConfigError("backend.kind = http requires backend.url");
  }
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["seed"] = std::to_string(seed);
  kv["corpus.path"] = corpus_path;
  kv["requests.path"] = requests_path;
  kv["out.dir"] = out_dir;
  kv["filter.min_words"] = std::to_string(min_words);
  kv["filter.min_docs"] = std::to_string(min_docs);
  kv["partition.mode"] = partition_mode;
  kv["partition.target_fraction"] = io::format_double(target_fraction);
  kv["auxlm.order"] = std::to_string(ngram_order);
  kv["auxlm.smoothing_k"] = io::format_double(smoothing_k);
  kv["auxlm.cache_lambda"] = io::format_double(cache_lambda);
  kv["auxlm.fewshot"] = std::to_string(fewshot_size);
  kv["select.top_fraction"] = io::format_double(top_fraction);
  kv["select.positives"] = std::to_string(positives_per_request);
  kv["select.negatives"] = std::to_string(negatives_per_positive);
  kv["train.tau"] = io::format_double(tau);
  kv["train.anchor_mode"] = anchor_mode;
  kv["train.anchor_y0"] = io::format_double(anchor_y0);
  kv["train.learning_rate"] = io::format_double(learning_rate);
  kv["train.epochs"] = std::to_string(epochs);
  kv["train.objective"] = objective;
  kv["retrieve.k"] = std::to_string(k);
  kv["retrieve.method"] = retriever_kind;
  kv["backend.kind"] = backend_kind;
  kv["backend.url"] = backend_url;
  kv["backend.timeout_ms"] = std::to_string(backend_timeout_ms);
  kv["backend.attempts"] = std::to_string(backend_attempts);
  kv["backend.max_inflight"] = std::to_string(backend_max_inflight);
  kv["generate.temperature"] = io::format_double(temperature);
  kv["generate.max_words"] = std::to_string(max_words);
  kv["generate.revise_all"] = revise_all ? "true" : "false";
  kv["generate.corpus"] = generate_corpus;
  kv["generate.requests"] = generate_requests;
  kv["generate.out"] = generate_out;
  kv["eval.metric"] = eval_metric;
  kv["eval.num_bins"] = std::to_string(num_bins);
  kv["route.metric"] = route_metric;

  std::string out;
  for (const auto& [key, value] : kv) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

}  // namespace pearl::cli
