#pragma once

#include <string>
#include <vector>

#include "pearl/eval.hpp"

namespace pearl::testsupport {

// Brute-force reimplementation of the cache-interpolated n-gram likelihood,
// counting directly over the raw training texts on every call. Shares only
// the tokenizer with the production path.
double oracle_log_likelihood(const std::vector<std::string>& training_texts, int order, double k,
                             const std::vector<double>& weights, const std::string& target,
                             const std::vector<std::string>& segments, double lambda);

// Independent clipped n-gram overlap counter.
eval::RougeScore oracle_rouge(const std::string& candidate, const std::string& reference, int n);

}  // namespace pearl::testsupport
