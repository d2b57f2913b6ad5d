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

#ifndef SHIFTBENCH_RECORDS_IO_HPP_
#define SHIFTBENCH_RECORDS_IO_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftbench/evaluation.hpp"

namespace shiftbench {

inline constexpr std::string_view kRecordsHeader =
    "protocol,method,repetition,config,degree,true_prev,est_prev,ae";

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

/// Streams records as CSV rows (LF line endings), writing the header first.
class CsvRecordWriter {
 public:
  explicit CsvRecordWriter(std::ostream& out);
  void write(const ExperimentRecord& record);
  Index count() const { return count_; }

 private:
  std::ostream* out_;
  Index count_ = 0;
};

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);
std::vector<ExperimentRecord> read_records_file(const std::string& path);

}  // namespace shiftbench

#endif  // SHIFTBENCH_RECORDS_IO_HPP_
