#include "pearl/genpipe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <semaphore>
#include <set>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "pearl/error.hpp"
#include "pearl/text.hpp"

namespace pearl::genpipe {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxExamples = 8;

std::string replace_all(std::string s, std::string_view slot, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = s.find(slot, pos)) != std::string::npos) {
    s.replace(pos, slot.size(), value);
    pos += value.size();
  }
  return s;
}

std::string render_examples(const PromptTemplate& tmpl,
                            const std::vector<corpus::Document>& retrieved) {
  std::string out;
  for (std::size_t i = 0; i < retrieved.size(); ++i) {
    std::string block = replace_all(tmpl.example_format, "{index}", std::to_string(i + 1));
    block = replace_all(std::move(block), "{text}", retrieved[i].text);
    out += block;
  }
  return out;
}

// Stub parsing of the default template markers. The stubs are dev backends
// and assume single-line requests.
std::string extract_request(const std::string& prompt) {
  static const std::string marker = "REQUEST: ";
  const auto pos = prompt.rfind(marker);
  if (pos == std::string::npos) return "";
  const auto start = pos + marker.size();
  const auto end = prompt.find('\n', start);
  return prompt.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

std::string extract_first_example(const std::string& prompt) {
  static const std::string marker = "EXAMPLE 1:\n";
  const auto pos = prompt.find(marker);
  if (pos == std::string::npos) return "";
  const auto start = pos + marker.size();
  const auto end = prompt.find("\n\n", start);
  return prompt.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

// Last five distinct content words of the request, in order. The synthetic
// request template puts the topic terms at the end.
std::vector<std::string> request_topic_words(const std::string& request) {
  const auto words = text::content_words(request);
  std::vector<std::string> distinct;
  for (const auto& w : words) {
    if (std::find(distinct.begin(), distinct.end(), w) == distinct.end()) distinct.push_back(w);
  }
  if (distinct.size() > 5) distinct.erase(distinct.begin(), distinct.end() - 5);
  return distinct;
}

}  // namespace

PromptTemplate PromptTemplate::generation_default() {
  PromptTemplate t;
  t.kind = TemplateKind::Generation;
  t.preamble =
      "You are drafting a POST on behalf of a USER. Study the USER's example posts "
      "below, then write a new POST that answers the REQUEST in the USER's own voice.\n\n";
  t.example_format = "EXAMPLE {index}:\n{text}\n\n";
  t.request_format = "REQUEST: {request}\n";
  t.closing = "POST:";
  return t;
}

PromptTemplate PromptTemplate::revision_default() {
  PromptTemplate t;
  t.kind = TemplateKind::Revision;
  t.preamble =
      "You are editing a USER's draft POST. Note anything the DRAFT is missing for the "
      "REQUEST and anything irrelevant to it, then output the corrected draft starting "
      "with the words EDITED DRAFT.\n\n";
  t.example_format = "EXAMPLE {index}:\n{text}\n\n";
  t.request_format = "REQUEST: {request}\n";
  t.draft_format = "DRAFT: {draft}\n";
  t.closing = "Respond with your notes, then the revision starting with the words EDITED DRAFT.";
  return t;
}

std::string build_prompt(const PromptTemplate& tmpl, const std::string& request_text,
                         const std::vector<corpus::Document>& retrieved) {
  if (retrieved.empty()) {
    throw std::invalid_argument(
        "build_prompt: retrieval list is empty; use a non-personalized template explicitly");
  }
  if (retrieved.size() > kMaxExamples) {
    throw std::invalid_argument("build_prompt: at most 8 retrieved examples");
  }
  std::string prompt = tmpl.preamble;
  prompt += render_examples(tmpl, retrieved);
  prompt += replace_all(tmpl.request_format, "{request}", request_text);
  prompt += tmpl.closing;
  return prompt;
}

std::string build_revision_prompt(const PromptTemplate& tmpl, const std::string& request_text,
                                  const std::string& draft,
                                  const std::vector<corpus::Document>& retrieved) {
  if (draft.empty()) throw std::invalid_argument("build_revision_prompt: draft must be non-empty");
  if (retrieved.size() > kMaxExamples) {
    throw std::invalid_argument("build_revision_prompt: at most 8 retrieved examples");
  }
  std::string prompt = tmpl.preamble;
  prompt += render_examples(tmpl, retrieved);
  prompt += replace_all(tmpl.request_format, "{request}", request_text);
  prompt += replace_all(tmpl.draft_format, "{draft}", draft);
  prompt += tmpl.closing;
  return prompt;
}

RevisionReply parse_revision_reply(const std::string& reply) {
  const auto pos = reply.rfind(kRevisionMarker);
  if (pos == std::string::npos) return RevisionReply{reply, false};
  auto start = pos + std::string(kRevisionMarker).size();
  while (start < reply.size() && (reply[start] == ':' || reply[start] == ' ' ||
                                  reply[start] == '\n' || reply[start] == '\r')) {
    ++start;
  }
  return RevisionReply{reply.substr(start), true};
}

std::string generate(Backend& backend, const std::string& prompt, double temperature,
                     std::size_t max_words) {
  if (prompt.empty()) throw std::invalid_argument("generate: prompt must be non-empty");
  return text::truncate_words(backend.complete(prompt, temperature, max_words), max_words);
}

std::string StubBackend::complete(const std::string& prompt, double /*temperature*/,
                                  std::size_t /*max_words*/) {
  if (prompt.find(kRevisionMarker) != std::string::npos) {
    // Revision behavior, shared by both modes: enumerate ordered pairs of the
    // request's topic words. Pair coverage recovers bigram overlap with a
    // reference built from those words even when retrieval found nothing.
    const auto words = request_topic_words(extract_request(prompt));
    std::vector<std::string> body;
    for (const auto& a : words) {
      for (const auto& b : words) {
        body.push_back(a);
        body.push_back(b);
      }
    }
    return "NOTES: reviewed the draft against the request.\nEDITED DRAFT:\n" +
           text::join(body, " ");
  }

  const std::string example = extract_first_example(prompt);
  if (mode_ == StubMode::CopyTopExample) return example;

  // Blend: request content words, then a prefix of the top example sized by
  // unigram overlap, so output quality degrades with retrieval quality.
  const auto request_words = text::content_words(extract_request(prompt));
  const auto example_tokens = text::tokenize(example);
  const std::set<std::string> rset(request_words.begin(), request_words.end());
  const std::set<std::string> eset(example_tokens.begin(), example_tokens.end());
  std::size_t shared = 0;
  for (const auto& w : rset) {
    if (eset.contains(w)) ++shared;
  }
  const double overlap =
      rset.empty() ? 0.0 : static_cast<double>(shared) / static_cast<double>(rset.size());
  const auto take = static_cast<std::size_t>(
      std::ceil(overlap * static_cast<double>(example_tokens.size())));

  std::vector<std::string> out = request_words;
  out.insert(out.end(), example_tokens.begin(),
             example_tokens.begin() + static_cast<std::ptrdiff_t>(take));
  return text::join(out, " ");
}

std::string StubBackend::name() const {
  return mode_ == StubMode::CopyTopExample ? "stub-copy" : "stub-blend";
}

struct HttpBackend::Impl {
  HttpBackendConfig cfg;
  std::string base;  // scheme://host[:port]
  std::string path;
  std::counting_semaphore<4096> slots;

  explicit Impl(HttpBackendConfig c)
      : cfg(std::move(c)), slots(std::max(1, cfg.max_inflight)) {
    const auto scheme_end = cfg.url.find("://");
    if (scheme_end == std::string::npos) {
      throw ConfigError("backend url must look like http://host:port/path");
    }
    if (cfg.url.substr(0, scheme_end) != "http") {
      throw ConfigError("only http:// backend urls are supported");
    }
    const auto slash = cfg.url.find('/', scheme_end + 3);
    if (slash == std::string::npos) {
      base = cfg.url;
      path = "/";
    } else {
      base = cfg.url.substr(0, slash);
      path = cfg.url.substr(slash);
    }
  }
};

HttpBackend::HttpBackend(HttpBackendConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
HttpBackend::~HttpBackend() = default;

std::string HttpBackend::name() const {
  return "http:" + impl_->cfg.url;
}

std::string HttpBackend::complete(const std::string& prompt, double temperature,
                                  std::size_t max_words) {
  impl_->slots.acquire();
  struct Release {
    std::counting_semaphore<4096>& s;
    ~Release() { s.release(); }
  } release{impl_->slots};

  json body;
  body["prompt"] = prompt;
  body["temperature"] = temperature;
  body["max_tokens"] = max_words;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!impl_->cfg.auth_token.empty()) {
    headers.emplace("Authorization", "Bearer " + impl_->cfg.auth_token);
  }

  std::string last_error = "no attempts made";
  const int attempts = std::max(1, impl_->cfg.attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const auto wait = std::chrono::milliseconds(impl_->cfg.backoff_ms) * (1 << (attempt - 1));
      std::this_thread::sleep_for(wait);
    }

    httplib::Client client(impl_->base);
    client.set_connection_timeout(0, impl_->cfg.timeout_ms * 1000);
    client.set_read_timeout(impl_->cfg.timeout_ms / 1000, (impl_->cfg.timeout_ms % 1000) * 1000);
    client.set_write_timeout(impl_->cfg.timeout_ms / 1000, (impl_->cfg.timeout_ms % 1000) * 1000);

    auto res = client.Post(impl_->path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server status " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw BackendError("backend returned status " + std::to_string(res->status));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.is_object() || !reply.contains("text") ||
        !reply["text"].is_string()) {
      throw BackendError("malformed backend reply: expected JSON object with string 'text'");
    }
    return reply["text"].get<std::string>();
  }
  throw BackendError("backend unreachable after " + std::to_string(attempts) +
                     " attempts: " + last_error);
}

void save_run(const std::vector<GenerationRecord>& records, const std::string& path,
              const io::RunStamp& stamp) {
  std::string out;
  {
    json header;
    header["kind"] = "generation-run";
    header["config_hash"] = stamp.config_hash;
    header["seed"] = stamp.seed;
    out += header.dump();
    out += '\n';
  }
  for (const auto& rec : records) {
    json j;
    j["request_id"] = rec.request_id;
    j["user_id"] = rec.user_id;
    json retrieved = json::array();
    for (const auto& sd : rec.retrieved) {
      retrieved.push_back({{"doc_id", sd.doc_id}, {"score", sd.score}});
    }
    j["retrieved"] = retrieved;
    j["prompt"] = rec.prompt;
    j["output_text"] = rec.output_text;
    j["backend"] = rec.backend;
    j["temperature"] = rec.temperature;
    j["s1"] = rec.s1;
    if (rec.reference_text) j["reference_text"] = *rec.reference_text;
    j["revised"] = rec.revised;
    if (rec.stage1_text) j["stage1_text"] = *rec.stage1_text;
    j["marker_found"] = rec.marker_found;
    // Reserved for an embedding-based metric; unset by this pipeline.
    j["bs_f1"] = nullptr;
    out += j.dump();
    out += '\n';
  }
  io::atomic_write(path, out);
}

std::vector<GenerationRecord> load_run(const std::string& path) {
  const auto lines = io::read_lines(path);
  std::vector<GenerationRecord> records;
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ParseError(path + " line " + std::to_string(lineno) + ": malformed JSON object");
    }
    if (j.contains("kind")) continue;  // provenance header
    try {
      GenerationRecord rec;
      rec.request_id = j.at("request_id").get<std::string>();
      rec.user_id = j.value("user_id", "");
      for (const auto& sd : j.value("retrieved", json::array())) {
        rec.retrieved.push_back(
            ScoredDoc{sd.at("doc_id").get<std::string>(), sd.at("score").get<double>()});
      }
      rec.prompt = j.value("prompt", "");
      rec.output_text = j.at("output_text").get<std::string>();
      rec.backend = j.value("backend", "");
      rec.temperature = j.value("temperature", 0.0);
      rec.s1 = j.value("s1", 0.0);
      if (j.contains("reference_text") && !j["reference_text"].is_null()) {
        rec.reference_text = j["reference_text"].get<std::string>();
      }
      rec.revised = j.value("revised", false);
      if (j.contains("stage1_text") && !j["stage1_text"].is_null()) {
        rec.stage1_text = j["stage1_text"].get<std::string>();
      }
      rec.marker_found = j.value("marker_found", true);
      records.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw ParseError(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace pearl::genpipe
