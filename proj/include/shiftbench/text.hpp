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

#ifndef SHIFTBENCH_TEXT_HPP_
#define SHIFTBENCH_TEXT_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftbench/common.hpp"

namespace shiftbench {

struct RawReview {
  std::string text;
  int stars = 0;
  Category category = Category::A;
  int useful_votes = 0;
};

/// Drops reviews shorter than `min_length` characters and reviews with fewer
/// than `min_votes` useful votes.
std::vector<RawReview> filter_reviews(std::vector<RawReview> reviews,
                                      std::size_t min_length = 200, int min_votes = 1);

/// Lowercases ASCII letters and splits on every non-alphanumeric byte.
std::vector<std::string> tokenize(std::string_view text);

/// Term index and document frequencies learnt from a training corpus.
/// Terms are indexed in lexicographic order.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<Index> document_frequency,
             Index document_count);

  Index size() const { return static_cast<Index>(terms_.size()); }
  Index document_count() const { return document_count_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<Index>& document_frequency() const { return df_; }

  /// -1 when the term is out of vocabulary.
  Index index_of(std::string_view term) const;

  /// ln((1 + N) / (1 + df)) + 1.
  double idf(Index term) const;

 private:
  std::vector<std::string> terms_;
  std::vector<Index> df_;
  std::map<std::string, Index, std::less<>> lookup_;
  Index document_count_ = 0;
};

Vocabulary fit_vocabulary(std::span<const std::string> training_texts, Index min_count = 3);

/// Raw term counts times idf, each row scaled to unit L2 norm. Documents with
/// no in-vocabulary term are zero rows.
FeatureMatrix vectorise(std::span<const std::string> texts, const Vocabulary& vocab);

}  // namespace shiftbench

#endif  // SHIFTBENCH_TEXT_HPP_
