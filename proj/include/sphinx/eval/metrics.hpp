// Copyright 2026 The Sphinx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sphinx::eval {

/// Lower-cased tokens. Runs of ASCII letters, digits, '_' and non-ASCII bytes
/// form words; every other printable ASCII character is a token of its own;
/// whitespace separates.
std::vector<std::string> tokenize(std::string_view text);

/// Unigram BLEU: clipped unigram precision times the brevity penalty
/// min(1, exp(1 - ref_len / hyp_len)). 0 for an empty hypothesis or
/// reference.
double bleu1(std::string_view hypothesis, std::string_view reference);
double bleu1_tokens(std::span<const std::string> hyp, std::span<const std::string> ref);

/// LCS-based F1 over tokens. 0 when the LCS is empty.
double rouge_l(std::string_view hypothesis, std::string_view reference);
double rouge_l_tokens(std::span<const std::string> hyp, std::span<const std::string> ref);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

struct TextPair {
  std::string hypothesis;
  std::string reference;
};

struct CorpusMetrics {
  std::vector<double> bleu1;    // per pair
  std::vector<double> rouge_l;  // per pair
  double bleu1_mean = 0.0;
  double rouge_l_mean = 0.0;
};

// Per-pair metrics plus their means. Means are summed in index order in both
// versions, so the two agree bit for bit.
namespace serial {
CorpusMetrics corpus_metrics(std::span<const TextPair> pairs);
}  // namespace serial

namespace omp {
CorpusMetrics corpus_metrics(std::span<const TextPair> pairs, int jobs = 0);
}  // namespace omp

}  // namespace sphinx::eval
