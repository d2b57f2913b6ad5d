/*
 * Copyright 2026 The shiftbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "shiftbench/text.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace shiftbench {

std::vector<RawReview> filter_reviews(std::vector<RawReview> reviews, std::size_t min_length,
                                      int min_votes) {
  std::erase_if(reviews, [&](const RawReview& r) {
    return r.text.size() < min_length || r.useful_votes < min_votes;
  });
  return reviews;
}

namespace {

// Bytes of multi-byte UTF-8 sequences count as word characters so non-ASCII
// words stay whole.
bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<Index> document_frequency,
                       Index document_count)
    : terms_(std::move(terms)), df_(std::move(document_frequency)), document_count_(document_count) {
  if (terms_.size() != df_.size())
    throw ValidationError("vocabulary terms and frequencies differ in length");
  for (std::size_t i = 0; i < terms_.size(); ++i) lookup_.emplace(terms_[i], static_cast<Index>(i));
}

Index Vocabulary::index_of(std::string_view term) const {
  auto it = lookup_.find(term);
  return it == lookup_.end() ? -1 : it->second;
}

double Vocabulary::idf(Index term) const {
  const auto n = static_cast<double>(document_count_);
  const auto df = static_cast<double>(df_[static_cast<std::size_t>(term)]);
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

Vocabulary fit_vocabulary(std::span<const std::string> training_texts, Index min_count) {
  if (training_texts.empty()) throw EmptyDatasetError("cannot fit a vocabulary on no documents");
  std::unordered_map<std::string, std::pair<Index, Index>> stats;  // term -> (count, df)
  for (const std::string& doc : training_texts) {
    std::vector<std::string> tokens = tokenize(doc);
    for (const std::string& t : tokens) ++stats[t].first;
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (const std::string& t : tokens) ++stats[t].second;
  }
  std::vector<std::string> terms;
  for (const auto& [term, s] : stats)
    if (s.first >= min_count) terms.push_back(term);
  if (terms.empty())
    throw EmptyDatasetError("no term reaches the minimum count of " + std::to_string(min_count));
  std::sort(terms.begin(), terms.end());
  std::vector<Index> df;
  df.reserve(terms.size());
  for (const std::string& t : terms) df.push_back(stats.at(t).second);
  return Vocabulary(std::move(terms), std::move(df), static_cast<Index>(training_texts.size()));
}

FeatureMatrix vectorise(std::span<const std::string> texts, const Vocabulary& vocab) {
  using Triplet = Eigen::Triplet<double, Index>;
  std::vector<Triplet> entries;
  std::map<Index, double> counts;
  for (std::size_t row = 0; row < texts.size(); ++row) {
    counts.clear();
    for (const std::string& t : tokenize(texts[row])) {
      const Index j = vocab.index_of(t);
      if (j >= 0) counts[j] += 1.0;
    }
    double norm2 = 0.0;
    for (auto& [j, v] : counts) {
      v *= vocab.idf(j);
      norm2 += v * v;
    }
    if (norm2 == 0.0) continue;
    const double scale = 1.0 / std::sqrt(norm2);
    for (const auto& [j, v] : counts) entries.emplace_back(static_cast<Index>(row), j, v * scale);
  }
  FeatureMatrix out(static_cast<Index>(texts.size()), vocab.size());
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

}  // namespace shiftbench
