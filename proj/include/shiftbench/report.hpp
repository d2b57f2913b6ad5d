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

#ifndef SHIFTBENCH_REPORT_HPP_
#define SHIFTBENCH_REPORT_HPP_

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftbench/evaluation.hpp"

namespace shiftbench {

enum class ReportFormat { Markdown, Csv, PlotData };

ReportFormat parse_report_format(std::string_view name);

struct DegreeRow {
  ShiftDegree degree;
  std::map<std::string, double> mae;
  std::map<std::string, Mark> marks;  // empty when only one method is present
};

struct ReportTable {
  std::string protocol;
  std::vector<std::string> methods;  // order of first appearance
  std::vector<DegreeRow> rows;       // ascending degree
};

/// One table per protocol. Within a degree row, methods are paired by
/// (repetition, config); differing pair sets are an error.
std::vector<ReportTable> build_report(std::span<const ExperimentRecord> records);

/// ".035"-style text with three decimals.
std::string format_mae(double mae);

void render_markdown(std::ostream& out, std::span<const ReportTable> tables);
void render_csv(std::ostream& out, std::span<const ReportTable> tables);
/// Per protocol, degree and method: count, min, q1, median, q3, max and the
/// ';'-separated outliers.
void render_plotdata(std::ostream& out, std::span<const ExperimentRecord> records);

void render_report(std::ostream& out, std::span<const ExperimentRecord> records, ReportFormat format);

}  // namespace shiftbench

#endif  // SHIFTBENCH_REPORT_HPP_
