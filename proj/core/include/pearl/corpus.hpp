#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pearl::corpus {

struct Document {
  std::string doc_id;
  std::string user_id;
  std::string text;
  std::optional<std::int64_t> timestamp;  // seconds since epoch
  bool operator==(const Document&) const = default;
};

struct UserHistory {
  std::string user_id;
  std::vector<Document> documents;  // sorted by (timestamp, doc_id)
  bool operator==(const UserHistory&) const = default;
};

struct RequestTarget {
  std::string request_id;
  std::string user_id;
  std::string request_text;
  std::optional<std::string> target_text;  // absent at live inference
  bool operator==(const RequestTarget&) const = default;
};

enum class PartitionMode { Temporal, Random };

// A user's history split into a retrieval candidate pool and a target set.
// Candidates and targets are disjoint and together cover the input history.
struct Partition {
  std::vector<Document> candidates;
  std::vector<Document> targets;
  PartitionMode mode = PartitionMode::Temporal;
  double target_fraction = 0.0;
};

// Reads a JSONL corpus (one document object per line: doc_id, user_id, text,
// optional integer timestamp). Documents are grouped by user, each user's
// list sorted by timestamp ascending with doc_id breaking ties, or by doc_id
// when the user has no timestamps. Users are returned sorted by user_id.
//
// Throws ParseError with the offending line number for malformed lines and
// ValidationError for duplicate doc_ids, empty text, or a user mixing
// documents with and without timestamps.
std::vector<UserHistory> load_corpus(const std::string& path);
void save_corpus(const std::vector<UserHistory>& histories, const std::string& path);

std::vector<RequestTarget> load_requests(const std::string& path);
void save_requests(const std::vector<RequestTarget>& requests, const std::string& path);

// Drops documents with at most min_words whitespace-delimited words, then
// users left with fewer than min_docs documents.
std::vector<UserHistory> filter_corpus(const std::vector<UserHistory>& histories,
                                       std::size_t min_words, std::size_t min_docs);

// Splits a history into candidates and targets. ceil(target_fraction * N)
// documents become targets, clamped so at least one document lands on each
// side. Temporal mode takes the latest documents as targets and requires
// timestamps; random mode is a seeded uniform split.
Partition partition_history(const UserHistory& history, PartitionMode mode,
                            double target_fraction, std::uint64_t seed);

// One request per target document: a fixed template listing the document's
// five most frequent content words (ties alphabetical). Documents with no
// content words fall back to their first five raw tokens. The target text is
// the document text and request ids derive from doc ids.
std::vector<RequestTarget> generate_synthetic_requests(const std::vector<Document>& targets,
                                                       std::uint64_t template_seed);

}  // namespace pearl::corpus
