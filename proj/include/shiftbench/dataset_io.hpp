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

#ifndef SHIFTBENCH_DATASET_IO_HPP_
#define SHIFTBENCH_DATASET_IO_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "shiftbench/core_data.hpp"
#include "shiftbench/datagen.hpp"
#include "shiftbench/text.hpp"

namespace shiftbench {

// Line-delimited JSON. Feature datasets carry one object per line with
// fields features, stars, label, category. Review corpora carry text, stars,
// category, useful_votes.

void write_dataset_jsonl(std::ostream& out, const GeneratedData& data);

std::vector<RawReview> read_reviews_jsonl(std::istream& in);

struct LoadedDataset {
  StarDataset data;
  bool is_text = false;
  std::size_t lines_read = 0;
  std::size_t filtered_out = 0;  // reviews removed by filter_reviews
};

/// Reads either format, deciding from the first record. Review corpora are
/// passed through filter_reviews and returned with texts and no features.
LoadedDataset read_dataset_jsonl(std::istream& in);
LoadedDataset read_dataset_file(const std::string& path);

}  // namespace shiftbench

#endif  // SHIFTBENCH_DATASET_IO_HPP_
