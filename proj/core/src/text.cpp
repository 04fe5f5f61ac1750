#include "pearl/text.hpp"

#include <cctype>
#include <unordered_set>

namespace pearl::text {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> words = {
      "a",     "about", "above",  "after",  "again",  "against", "all",   "an",
      "and",   "any",   "are",    "as",     "at",     "be",      "because",
      "been",  "being", "below",  "between", "both",  "but",     "by",    "can",
      "did",   "do",    "does",   "doing",  "down",   "during",  "each",  "else",
      "few",   "for",   "from",   "further", "had",   "has",     "have",  "having",
      "he",    "her",   "here",   "him",    "his",    "i",       "if",    "in",
      "into",  "is",    "it",     "its",    "just",   "me",      "more",  "most",
      "my",    "no",    "nor",    "not",    "now",    "of",      "off",   "on",
      "once",  "only",  "or",     "other",  "our",    "out",     "over",  "own",
      "same",  "she",   "should", "so",     "some",   "such",    "than",  "that",
      "the",   "their", "them",   "then",   "there",  "these",   "they",  "this",
      "those", "through", "to",   "too",    "under",  "until",   "up",    "very",
      "was",   "we",    "were",   "what",   "when",   "which",   "while", "who",
      "will",  "with",  "you",    "your",
  };
  return words;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : s) {
    if (is_word_byte(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> whitespace_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      if (!cur.empty()) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(static_cast<char>(c));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::size_t word_count(std::string_view s) {
  return whitespace_tokens(s).size();
}

std::string truncate_words(std::string_view s, std::size_t max_words) {
  auto words = whitespace_tokens(s);
  if (words.size() <= max_words) return std::string(s);
  words.resize(max_words);
  return join(words, " ");
}

bool is_stopword(const std::string& token) {
  return stopword_set().contains(token);
}

std::vector<std::string> content_words(std::string_view s) {
  std::vector<std::string> out;
  for (auto& tok : tokenize(s)) {
    if (!is_stopword(tok)) out.push_back(std::move(tok));
  }
  return out;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int n) {
  std::vector<std::string> out;
  if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string g = tokens[i];
    for (int j = 1; j < n; ++j) {
      g += ' ';
      g += tokens[i + j];
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::set<std::string> char_trigrams(std::string_view s) {
  // Lowercase and collapse whitespace runs to a single space first so that
  // formatting differences do not perturb the feature.
  std::string norm;
  norm.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      pending_space = !norm.empty();
    } else {
      if (pending_space) {
        norm.push_back(' ');
        pending_space = false;
      }
      norm.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  std::set<std::string> grams;
  if (norm.size() >= 3) {
    for (std::size_t i = 0; i + 3 <= norm.size(); ++i) {
      grams.insert(norm.substr(i, 3));
    }
  }
  return grams;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace pearl::text
