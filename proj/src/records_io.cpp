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

#include "shiftbench/records_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace shiftbench {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_real(std::string_view text, std::size_t lineno) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ValidationError(fmt::format("records line {}: bad number '{}'", lineno, s));
  return v;
}

int parse_int(std::string_view text, std::size_t lineno) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError(fmt::format("records line {}: bad integer '{}'", lineno, text));
  return v;
}

}  // namespace

std::string format_real(double value) { return fmt::format("{}", value); }

CsvRecordWriter::CsvRecordWriter(std::ostream& out) : out_(&out) { *out_ << kRecordsHeader << '\n'; }

void CsvRecordWriter::write(const ExperimentRecord& r) {
  if (r.config.find(',') != std::string::npos || r.method.find(',') != std::string::npos ||
      r.protocol.find(',') != std::string::npos)
    throw ValidationError("record fields may not contain commas");
  *out_ << r.protocol << ',' << r.method << ',' << r.repetition << ',' << r.config << ','
        << r.degree.str() << ',' << format_real(r.true_prev) << ',' << format_real(r.est_prev)
        << ',' << format_real(r.ae) << '\n';
  ++count_;
}

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records) {
  CsvRecordWriter writer(out);
  for (const auto& r : records) writer.write(r);
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw EmptyDatasetError("records file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) throw ValidationError("records file has an unexpected header");
  std::vector<ExperimentRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 8)
      throw ValidationError(fmt::format("records line {}: expected 8 fields, got {}", lineno, f.size()));
    ExperimentRecord r;
    r.protocol = std::string(f[0]);
    r.method = std::string(f[1]);
    r.repetition = parse_int(f[2], lineno);
    r.config = std::string(f[3]);
    r.degree = ShiftDegree::parse(f[4]);
    r.true_prev = parse_real(f[5], lineno);
    r.est_prev = parse_real(f[6], lineno);
    r.ae = parse_real(f[7], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ExperimentRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open records file '" + path + "'");
  return read_records_csv(in);
}

}  // namespace shiftbench
