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

#include "shiftbench/report.hpp"

#include <algorithm>
#include <ostream>
#include <utility>

#include <fmt/format.h>

#include "shiftbench/records_io.hpp"

namespace shiftbench {

namespace {

using PairKey = std::pair<int, std::string>;  // (repetition, config)

std::vector<std::string> methods_in_order(std::span<const ExperimentRecord> records,
                                          std::string_view protocol) {
  std::vector<std::string> methods;
  for (const auto& r : records)
    if (r.protocol == protocol && std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
  return methods;
}

std::vector<std::string> protocols_in_order(std::span<const ExperimentRecord> records) {
  std::vector<std::string> out;
  for (const auto& r : records)
    if (std::find(out.begin(), out.end(), r.protocol) == out.end()) out.push_back(r.protocol);
  return out;
}

std::string_view mark_symbol(Mark m) {
  switch (m) {
    case Mark::Dagger: return "†";
    case Mark::DoubleDagger: return "‡";
    default: return "";
  }
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "plotdata") return ReportFormat::PlotData;
  throw ValidationError("unknown report format '" + std::string(name) +
                        "' (expected markdown, csv or plotdata)");
}

std::vector<ReportTable> build_report(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw EmptyDatasetError("no records to report");
  std::vector<ReportTable> tables;
  for (const std::string& protocol : protocols_in_order(records)) {
    ReportTable t;
    t.protocol = protocol;
    t.methods = methods_in_order(records, protocol);

    std::map<ShiftDegree, std::map<std::string, std::map<PairKey, double>>> cells;
    for (const auto& r : records) {
      if (r.protocol != protocol) continue;
      auto& slot = cells[r.degree][r.method];
      if (!slot.emplace(PairKey{r.repetition, r.config}, r.ae).second)
        throw ValidationError(fmt::format("duplicate record for {} {} repetition {} config {}",
                                          protocol, r.method, r.repetition, r.config));
    }

    for (const auto& [degree, by_method] : cells) {
      DegreeRow row;
      row.degree = degree;
      std::map<std::string, std::vector<double>> vectors;
      const std::map<PairKey, double>* reference = nullptr;
      for (const auto& [method, pairs] : by_method) {
        if (reference == nullptr) reference = &pairs;
        bool aligned = pairs.size() == reference->size();
        for (auto a = pairs.begin(), b = reference->begin(); aligned && a != pairs.end(); ++a, ++b)
          aligned = a->first == b->first;
        if (!aligned)
          throw DimensionMismatchError(fmt::format(
              "{} degree {}: method {} is not paired with the other methods", protocol,
              degree.str(), method));
        std::vector<double> v;
        v.reserve(pairs.size());
        double sum = 0.0;
        for (const auto& [key, ae] : pairs) {
          v.push_back(ae);
          sum += ae;
        }
        row.mae[method] = sum / static_cast<double>(v.size());
        vectors[method] = std::move(v);
      }
      if (vectors.size() >= 2) row.marks = mark_significance(vectors);
      t.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

std::string format_mae(double mae) {
  std::string s = fmt::format("{:.3f}", mae);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

void render_markdown(std::ostream& out, std::span<const ReportTable> tables) {
  bool first = true;
  for (const auto& t : tables) {
    if (!first) out << '\n';
    first = false;
    out << "## " << t.protocol << "\n\n| degree |";
    for (const auto& m : t.methods) out << ' ' << m << " |";
    out << "\n|---:|";
    for (std::size_t i = 0; i < t.methods.size(); ++i) out << "---:|";
    out << '\n';
    for (const auto& row : t.rows) {
      out << "| " << row.degree.str() << " |";
      for (const auto& m : t.methods) {
        const auto it = row.mae.find(m);
        if (it == row.mae.end()) {
          out << " - |";
          continue;
        }
        const std::string v = format_mae(it->second);
        const auto mk = row.marks.find(m);
        if (mk != row.marks.end() && mk->second == Mark::Best)
          out << " **" << v << "** |";
        else
          out << ' ' << v << (mk != row.marks.end() ? mark_symbol(mk->second) : "") << " |";
      }
      out << '\n';
    }
  }
}

void render_csv(std::ostream& out, std::span<const ReportTable> tables) {
  out << "protocol,degree,method,mae,mark\n";
  for (const auto& t : tables)
    for (const auto& row : t.rows)
      for (const auto& m : t.methods) {
        const auto it = row.mae.find(m);
        if (it == row.mae.end()) continue;
        const auto mk = row.marks.find(m);
        out << t.protocol << ',' << row.degree.str() << ',' << m << ',' << format_real(it->second)
            << ',' << (mk == row.marks.end() ? "" : to_string(mk->second)) << '\n';
      }
}

void render_plotdata(std::ostream& out, std::span<const ExperimentRecord> records) {
  if (records.empty()) throw EmptyDatasetError("no records to report");
  out << "protocol,degree,method,count,min,q1,median,q3,max,outliers\n";
  for (const std::string& protocol : protocols_in_order(records)) {
    const auto methods = methods_in_order(records, protocol);
    std::map<ShiftDegree, std::map<std::string, std::vector<double>>> groups;
    for (const auto& r : records)
      if (r.protocol == protocol) groups[r.degree][r.method].push_back(r.ae);
    for (auto& [degree, by_method] : groups)
      for (const auto& m : methods) {
        const auto it = by_method.find(m);
        if (it == by_method.end()) continue;
        const BoxStats b = box_stats(it->second);
        out << protocol << ',' << degree.str() << ',' << m << ',' << b.count << ','
            << format_real(b.min) << ',' << format_real(b.q1) << ',' << format_real(b.median)
            << ',' << format_real(b.q3) << ',' << format_real(b.max) << ',';
        for (std::size_t i = 0; i < b.outliers.size(); ++i)
          out << (i ? ";" : "") << format_real(b.outliers[i]);
        out << '\n';
      }
  }
}

void render_report(std::ostream& out, std::span<const ExperimentRecord> records,
                   ReportFormat format) {
  if (format == ReportFormat::PlotData) {
    render_plotdata(out, records);
    return;
  }
  const auto tables = build_report(records);
  if (format == ReportFormat::Markdown)
    render_markdown(out, tables);
  else
    render_csv(out, tables);
}

}  // namespace shiftbench
