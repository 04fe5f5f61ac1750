#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pearl::text {

// The shared tokenizer: lowercase, tokens are maximal runs of alphanumeric
// bytes (UTF-8 bytes >= 0x80 count as word characters), whitespace and
// punctuation delimit. Every module tokenizes through this one function.
std::vector<std::string> tokenize(std::string_view s);

// Whitespace-delimited tokens; used for word counts and output truncation.
std::vector<std::string> whitespace_tokens(std::string_view s);
std::size_t word_count(std::string_view s);

// At most max_words whitespace tokens. Never splits a token; returns the
// input unchanged when it is already within the limit.
std::string truncate_words(std::string_view s, std::size_t max_words);

bool is_stopword(const std::string& token);

// Tokens with stopwords removed.
std::vector<std::string> content_words(std::string_view s);

// Token n-grams as space-joined strings, in order of occurrence.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int n);

// Distinct character 3-grams of the lowercased, whitespace-collapsed text.
std::set<std::string> char_trigrams(std::string_view s);

std::string lower_ascii(std::string_view s);
std::string trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace pearl::text
