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

#include "sphinx/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sphinx/util/parallel.hpp"

namespace sphinx::eval {
namespace {

bool word_byte(unsigned char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
         ch == '_' || ch >= 0x80;
}

bool punct_byte(unsigned char ch) { return ch > 0x20 && ch < 0x7F && !word_byte(ch); }

char lower(unsigned char ch) {
  return (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a') : static_cast<char>(ch);
}

double mean_in_order(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string word;
  for (char c : text) {
    const auto ch = static_cast<unsigned char>(c);
    if (word_byte(ch)) {
      word.push_back(lower(ch));
      continue;
    }
    if (!word.empty()) {
      tokens.push_back(std::move(word));
      word.clear();
    }
    if (punct_byte(ch)) tokens.emplace_back(1, c);
  }
  if (!word.empty()) tokens.push_back(std::move(word));
  return tokens;
}

double bleu1_tokens(std::span<const std::string> hyp, std::span<const std::string> ref) {
  if (hyp.empty() || ref.empty()) return 0.0;
  std::unordered_map<std::string_view, std::size_t> ref_counts;
  for (const auto& t : ref) ++ref_counts[t];
  std::size_t clipped = 0;
  std::unordered_map<std::string_view, std::size_t> used;
  for (const auto& t : hyp) {
    const auto it = ref_counts.find(t);
    if (it == ref_counts.end()) continue;
    if (used[t] < it->second) {
      ++used[t];
      ++clipped;
    }
  }
  const double hyp_len = static_cast<double>(hyp.size());
  const double ref_len = static_cast<double>(ref.size());
  const double precision = static_cast<double>(clipped) / hyp_len;
  const double bp = std::min(1.0, std::exp(1.0 - ref_len / hyp_len));
  return precision * bp;
}

double bleu1(std::string_view hypothesis, std::string_view reference) {
  const auto h = tokenize(hypothesis);
  const auto r = tokenize(reference);
  return bleu1_tokens(h, r);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  if (b.size() > a.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l_tokens(std::span<const std::string> hyp, std::span<const std::string> ref) {
  const std::size_t lcs = lcs_length(hyp, ref);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(hyp.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

double rouge_l(std::string_view hypothesis, std::string_view reference) {
  const auto h = tokenize(hypothesis);
  const auto r = tokenize(reference);
  return rouge_l_tokens(h, r);
}

namespace serial {

CorpusMetrics corpus_metrics(std::span<const TextPair> pairs) {
  CorpusMetrics out;
  out.bleu1.resize(pairs.size());
  out.rouge_l.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto h = tokenize(pairs[i].hypothesis);
    const auto r = tokenize(pairs[i].reference);
    out.bleu1[i] = bleu1_tokens(h, r);
    out.rouge_l[i] = rouge_l_tokens(h, r);
  }
  out.bleu1_mean = mean_in_order(out.bleu1);
  out.rouge_l_mean = mean_in_order(out.rouge_l);
  return out;
}

}  // namespace serial

namespace omp {

CorpusMetrics corpus_metrics(std::span<const TextPair> pairs, int jobs) {
  CorpusMetrics out;
  out.bleu1.resize(pairs.size());
  out.rouge_l.resize(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
  const int threads = resolve_jobs(jobs);
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto h = tokenize(pairs[idx].hypothesis);
    const auto r = tokenize(pairs[idx].reference);
    out.bleu1[idx] = bleu1_tokens(h, r);
    out.rouge_l[idx] = rouge_l_tokens(h, r);
  }
  out.bleu1_mean = mean_in_order(out.bleu1);
  out.rouge_l_mean = mean_in_order(out.rouge_l);
  return out;
}

}  // namespace omp

}  // namespace sphinx::eval
