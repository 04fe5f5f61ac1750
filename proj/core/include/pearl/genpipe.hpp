#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pearl/corpus.hpp"
#include "pearl/io.hpp"
#include "pearl/ranking.hpp"

namespace pearl::genpipe {

enum class TemplateKind { Generation, Revision };

// Prompt templates are data: a preamble, a per-example block format, slot
// formats for the request and (for revision) the draft, and a closing
// instruction. Rendering with k retrieved documents yields exactly k example
// blocks in retrieval-score order, best first.
struct PromptTemplate {
  TemplateKind kind = TemplateKind::Generation;
  std::string preamble;
  std::string example_format;  // placeholders {index} and {text}
  std::string request_format;  // placeholder {request}
  std::string draft_format;    // placeholder {draft}; revision templates only
  std::string closing;

  static PromptTemplate generation_default();
  static PromptTemplate revision_default();
};

// Replies to revision prompts are asked to restate the result after this
// marker; parsing splits on its final occurrence.
inline constexpr const char* kRevisionMarker = "EDITED DRAFT";

// Renders the generation prompt. Requires 1 <= |retrieved| <= 8; callers that
// want a non-personalized prompt must use a template without example blocks
// explicitly rather than passing an empty retrieval list.
std::string build_prompt(const PromptTemplate& tmpl, const std::string& request_text,
                         const std::vector<corpus::Document>& retrieved);

// Renders the revision prompt embedding the request, the stage-1 draft, and
// (when documents are given) the retrieved examples.
std::string build_revision_prompt(const PromptTemplate& tmpl, const std::string& request_text,
                                  const std::string& draft,
                                  const std::vector<corpus::Document>& retrieved);

struct RevisionReply {
  std::string text;
  bool marker_found = false;  // false: marker missing, whole reply returned
};
RevisionReply parse_revision_reply(const std::string& reply);

class Backend {
 public:
  virtual ~Backend() = default;
  // Returns raw backend text; the free function generate() applies the word
  // cap. Implementations must tolerate concurrent calls.
  virtual std::string complete(const std::string& prompt, double temperature,
                               std::size_t max_words) = 0;
  virtual std::string name() const = 0;
};

// Runs the backend and truncates the reply to max_words whitespace tokens.
std::string generate(Backend& backend, const std::string& prompt, double temperature = 0.0,
                     std::size_t max_words = 300);

// Deterministic test/dev backends; output is a pure function of the prompt.
//   CopyTopExample: returns the first example block's text.
//   Blend: request content words followed by a unigram-overlap-weighted
//          prefix of the top example, so output quality tracks retrieval
//          quality. Revision prompts (either mode) are answered with an
//          "EDITED DRAFT" whose body enumerates ordered pairs of the
//          request's content words.
enum class StubMode { CopyTopExample, Blend };

class StubBackend final : public Backend {
 public:
  explicit StubBackend(StubMode mode) : mode_(mode) {}
  std::string complete(const std::string& prompt, double temperature,
                       std::size_t max_words) override;
  std::string name() const override;

 private:
  StubMode mode_;
};

struct HttpBackendConfig {
  std::string url;         // http://host:port/path
  std::string auth_token;  // sent as "Authorization: Bearer <token>" when set
  int timeout_ms = 30000;
  int attempts = 3;      // total tries for transport errors and 5xx statuses
  int backoff_ms = 500;  // doubles after each failed attempt
  int max_inflight = 4;  // concurrent request bound
};

// Posts {"prompt", "temperature", "max_tokens"} as JSON and expects a JSON
// object {"text": ...} back. Throws BackendError on transport failure after
// all attempts, non-2xx status, or a malformed body.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  ~HttpBackend() override;
  std::string complete(const std::string& prompt, double temperature,
                       std::size_t max_words) override;
  std::string name() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct GenerationRecord {
  std::string request_id;
  std::string user_id;
  std::vector<ScoredDoc> retrieved;  // retrieval order, best first
  std::string prompt;
  std::string output_text;
  std::string backend;
  double temperature = 0.0;
  double s1 = 0.0;  // top-1 retrieval score
  std::optional<std::string> reference_text;
  bool revised = false;
  std::optional<std::string> stage1_text;  // pre-revision draft, when revised
  bool marker_found = true;
};

void save_run(const std::vector<GenerationRecord>& records, const std::string& path,
              const io::RunStamp& stamp);
std::vector<GenerationRecord> load_run(const std::string& path);

}  // namespace pearl::genpipe
