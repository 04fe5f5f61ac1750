#include "support/planted.hpp"

#include <cstdio>

#include "pearl/rng.hpp"
#include "pearl/text.hpp"

namespace pearl::testsupport {

namespace {

std::string pad(int v, int width) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%0*d", width, v);
  return buf;
}

}  // namespace

std::string planted_user_id(int user) {
  return "u" + pad(user, 3);
}

std::string planted_id(int user, int doc) {
  return planted_user_id(user) + "-d" + pad(doc, 2);
}

PlantedCorpus make_planted(const PlantedOptions& options) {
  PlantedCorpus out;
  out.options = options;
  for (int u = 0; u < options.users; ++u) {
    corpus::UserHistory history;
    history.user_id = planted_user_id(u);
    for (int d = 0; d < options.docs_per_user; ++d) {
      corpus::Document doc;
      doc.doc_id = planted_id(u, d);
      doc.user_id = history.user_id;
      doc.timestamp = d;

      std::vector<std::string> topic;
      for (int w = 0; w < options.topic_vocab; ++w) {
        topic.push_back("u" + std::to_string(u) + "d" + std::to_string(d) + "w" +
                        std::to_string(w));
      }
      // One full pass over the topic so every word occurs, then random draws
      // to the target length.
      SplitMix64 rng(sub_seed(options.seed, "doc:" + doc.doc_id));
      std::vector<std::string> words = topic;
      rng.shuffle(words);
      while (static_cast<int>(words.size()) < options.words_per_doc) {
        words.push_back(topic[rng.next_below(topic.size())]);
      }
      doc.text = text::join(words, " ");
      history.documents.push_back(std::move(doc));
    }
    out.histories.push_back(std::move(history));
  }
  return out;
}

std::vector<corpus::RequestTarget> planted_requests(const PlantedCorpus& corpus, int first_doc,
                                                    int last_doc) {
  std::vector<pearl::corpus::Document> targets;
  for (const auto& history : corpus.histories) {
    for (int d = first_doc; d < last_doc && d < static_cast<int>(history.documents.size()); ++d) {
      targets.push_back(history.documents[static_cast<std::size_t>(d)]);
    }
  }
  return pearl::corpus::generate_synthetic_requests(targets, corpus.options.seed);
}

std::string planted_doc_id(const corpus::RequestTarget& request) {
  // generate_synthetic_requests derives request ids as "req-<doc_id>".
  return request.request_id.substr(4);
}

}  // namespace pearl::testsupport
