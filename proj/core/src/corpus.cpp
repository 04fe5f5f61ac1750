#include "pearl/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "pearl/error.hpp"
#include "pearl/io.hpp"
#include "pearl/rng.hpp"
#include "pearl/text.hpp"

namespace pearl::corpus {

using nlohmann::json;

namespace {

json parse_line(const std::string& line, const std::string& path, std::size_t lineno) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError(path + " line " + std::to_string(lineno) + ": malformed JSON object");
  }
  return j;
}

std::string require_string(const json& j, const char* field, const std::string& path,
                           std::size_t lineno) {
  if (!j.contains(field) || !j[field].is_string()) {
    throw ParseError(path + " line " + std::to_string(lineno) + ": missing field '" +
                     field + "'");
  }
  return j[field].get<std::string>();
}

void sort_documents(std::vector<Document>& docs) {
  std::sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) {
    if (a.timestamp.has_value() && b.timestamp.has_value() && *a.timestamp != *b.timestamp) {
      return *a.timestamp < *b.timestamp;
    }
    return a.doc_id < b.doc_id;
  });
}

// Guards against ceil(f * n) picking up one extra element when f * n is an
// integer that floating point represents from above.
std::size_t ceil_fraction(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

}  // namespace

std::vector<UserHistory> load_corpus(const std::string& path) {
  const auto lines = io::read_lines(path);
  std::unordered_set<std::string> seen_ids;
  std::map<std::string, std::vector<Document>> by_user;

  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const json j = parse_line(line, path, lineno);

    Document doc;
    doc.doc_id = require_string(j, "doc_id", path, lineno);
    doc.user_id = require_string(j, "user_id", path, lineno);
    doc.text = require_string(j, "text", path, lineno);
    if (j.contains("timestamp") && !j["timestamp"].is_null()) {
      if (!j["timestamp"].is_number_integer()) {
        throw ParseError(path + " line " + std::to_string(lineno) +
                         ": field 'timestamp' must be an integer");
      }
      doc.timestamp = j["timestamp"].get<std::int64_t>();
    }

    if (text::trim(doc.text).empty()) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": document text is empty");
    }
    if (!seen_ids.insert(doc.doc_id).second) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": duplicate doc_id '" + doc.doc_id + "'");
    }
    by_user[doc.user_id].push_back(std::move(doc));
  }

  std::vector<UserHistory> histories;
  histories.reserve(by_user.size());
  for (auto& [user_id, docs] : by_user) {
    const bool any_ts = std::any_of(docs.begin(), docs.end(),
                                    [](const Document& d) { return d.timestamp.has_value(); });
    const bool all_ts = std::all_of(docs.begin(), docs.end(),
                                    [](const Document& d) { return d.timestamp.has_value(); });
    if (any_ts && !all_ts) {
      throw ValidationError(path + ": user '" + user_id +
                            "' mixes documents with and without timestamps");
    }
    sort_documents(docs);
    histories.push_back(UserHistory{user_id, std::move(docs)});
  }
  return histories;
}

void save_corpus(const std::vector<UserHistory>& histories, const std::string& path) {
  std::string out;
  for (const auto& history : histories) {
    for (const auto& doc : history.documents) {
      json j;
      j["doc_id"] = doc.doc_id;
      j["user_id"] = doc.user_id;
      j["text"] = doc.text;
      if (doc.timestamp) j["timestamp"] = *doc.timestamp;
      out += j.dump();
      out += '\n';
    }
  }
  io::atomic_write(path, out);
}

std::vector<RequestTarget> load_requests(const std::string& path) {
  const auto lines = io::read_lines(path);
  std::vector<RequestTarget> requests;
  std::unordered_set<std::string> seen_ids;

  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const json j = parse_line(line, path, lineno);

    RequestTarget req;
    req.request_id = require_string(j, "request_id", path, lineno);
    req.user_id = require_string(j, "user_id", path, lineno);
    req.request_text = require_string(j, "request_text", path, lineno);
    if (j.contains("target_text") && !j["target_text"].is_null()) {
      if (!j["target_text"].is_string()) {
        throw ParseError(path + " line " + std::to_string(lineno) +
                         ": field 'target_text' must be a string");
      }
      req.target_text = j["target_text"].get<std::string>();
    }

    if (text::trim(req.request_text).empty()) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": request_text is empty");
    }
    if (req.target_text && text::trim(*req.target_text).empty()) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": target_text present but empty");
    }
    if (!seen_ids.insert(req.request_id).second) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": duplicate request_id '" + req.request_id + "'");
    }
    requests.push_back(std::move(req));
  }
  return requests;
}

void save_requests(const std::vector<RequestTarget>& requests, const std::string& path) {
  std::string out;
  for (const auto& req : requests) {
    json j;
    j["request_id"] = req.request_id;
    j["user_id"] = req.user_id;
    j["request_text"] = req.request_text;
    if (req.target_text) j["target_text"] = *req.target_text;
    out += j.dump();
    out += '\n';
  }
  io::atomic_write(path, out);
}

std::vector<UserHistory> filter_corpus(const std::vector<UserHistory>& histories,
                                       std::size_t min_words, std::size_t min_docs) {
  if (min_docs < 1) throw std::invalid_argument("filter_corpus: min_docs must be >= 1");
  std::vector<UserHistory> out;
  for (const auto& history : histories) {
    UserHistory kept;
    kept.user_id = history.user_id;
    for (const auto& doc : history.documents) {
      if (text::word_count(doc.text) > min_words) kept.documents.push_back(doc);
    }
    if (kept.documents.size() >= min_docs) out.push_back(std::move(kept));
  }
  return out;
}

Partition partition_history(const UserHistory& history, PartitionMode mode,
                            double target_fraction, std::uint64_t seed) {
  const std::size_t n = history.documents.size();
  if (n < 2) throw std::invalid_argument("partition_history: need at least 2 documents");
  if (!(target_fraction > 0.0 && target_fraction < 1.0)) {
    throw std::invalid_argument("partition_history: target_fraction must be in (0,1)");
  }

  std::size_t n_targets = ceil_fraction(target_fraction, n);
  n_targets = std::max<std::size_t>(1, std::min(n_targets, n - 1));

  Partition part;
  part.mode = mode;
  part.target_fraction = target_fraction;

  if (mode == PartitionMode::Temporal) {
    for (const auto& doc : history.documents) {
      if (!doc.timestamp.has_value()) {
        throw ValidationError("partition_history: temporal mode requires timestamps (user '" +
                              history.user_id + "')");
      }
    }
    std::vector<Document> docs = history.documents;
    sort_documents(docs);
    part.candidates.assign(docs.begin(), docs.end() - static_cast<std::ptrdiff_t>(n_targets));
    part.targets.assign(docs.end() - static_cast<std::ptrdiff_t>(n_targets), docs.end());
  } else {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    SplitMix64 rng(seed);
    rng.shuffle(idx);
    std::vector<bool> is_target(n, false);
    for (std::size_t i = 0; i < n_targets; ++i) is_target[idx[i]] = true;
    for (std::size_t i = 0; i < n; ++i) {
      (is_target[i] ? part.targets : part.candidates).push_back(history.documents[i]);
    }
  }
  return part;
}

std::vector<RequestTarget> generate_synthetic_requests(const std::vector<Document>& targets,
                                                       std::uint64_t /*template_seed*/) {
  // Template v1. The seed is part of the interface for alternative template
  // families; v1 is fully deterministic without it.
  constexpr std::size_t kTopWords = 5;
  std::vector<RequestTarget> requests;
  requests.reserve(targets.size());

  for (const auto& doc : targets) {
    if (text::trim(doc.text).empty()) {
      throw ValidationError("generate_synthetic_requests: empty document '" + doc.doc_id + "'");
    }
    std::map<std::string, std::size_t> freq;
    for (const auto& word : text::content_words(doc.text)) ++freq[word];

    std::vector<std::string> picked;
    if (!freq.empty()) {
      std::vector<std::pair<std::string, std::size_t>> items(freq.begin(), freq.end());
      std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      for (std::size_t i = 0; i < items.size() && i < kTopWords; ++i) {
        picked.push_back(items[i].first);
      }
    } else {
      // Stopword-only document: fall back to the first raw tokens.
      const auto raw = text::tokenize(doc.text);
      for (std::size_t i = 0; i < raw.size() && i < kTopWords; ++i) picked.push_back(raw[i]);
    }

    RequestTarget req;
    req.request_id = "req-" + doc.doc_id;
    req.user_id = doc.user_id;
    req.request_text = "Write a post about: " + text::join(picked, ", ");
    req.target_text = doc.text;
    requests.push_back(std::move(req));
  }
  return requests;
}

}  // namespace pearl::corpus
