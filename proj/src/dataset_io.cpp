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

#include "shiftbench/dataset_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace shiftbench {

void write_dataset_jsonl(std::ostream& out, const GeneratedData& data) {
  const StarDataset& d = data.stars;
  const Eigen::MatrixXd dense = Eigen::MatrixXd(d.features);
  for (Index i = 0; i < d.size(); ++i) {
    nlohmann::ordered_json line;
    std::vector<double> x(static_cast<std::size_t>(dense.cols()));
    for (Index j = 0; j < dense.cols(); ++j) x[static_cast<std::size_t>(j)] = dense(i, j);
    line["features"] = std::move(x);
    line["stars"] = d.stars[i];
    line["label"] = data.labels[i];
    line["category"] = std::string(to_string(d.categories[static_cast<std::size_t>(i)]));
    out << line.dump() << '\n';
  }
}

namespace {

RawReview review_from_json(const nlohmann::json& j) {
  RawReview r;
  r.text = j.at("text").get<std::string>();
  r.stars = j.at("stars").get<int>();
  r.category = parse_category(j.at("category").get<std::string>());
  r.useful_votes = j.value("useful_votes", 0);
  if (r.stars < 1 || r.stars > 5) throw ValidationError("review stars outside 1..5");
  if (r.useful_votes < 0) throw ValidationError("negative useful_votes");
  return r;
}

template <typename Fn>
std::size_t for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
    }
    ++records;
  }
  return records;
}

}  // namespace

std::vector<RawReview> read_reviews_jsonl(std::istream& in) {
  std::vector<RawReview> reviews;
  for_each_record(in, [&](const nlohmann::json& j) { reviews.push_back(review_from_json(j)); });
  return reviews;
}

LoadedDataset read_dataset_jsonl(std::istream& in) {
  LoadedDataset out;
  std::vector<RawReview> reviews;
  std::vector<Eigen::Triplet<double, Index>> entries;
  std::vector<int> stars;
  Index dim = -1;
  int mode = 0;  // 0 unknown, 1 features, 2 reviews

  out.lines_read = for_each_record(in, [&](const nlohmann::json& j) {
    const int this_mode = j.contains("text") ? 2 : 1;
    if (mode == 0) mode = this_mode;
    if (mode != this_mode) throw ValidationError("mixed review and feature records");
    if (mode == 2) {
      reviews.push_back(review_from_json(j));
      return;
    }
    const auto& f = j.at("features");
    if (!f.is_array() || f.empty()) throw ValidationError("features must be a non-empty array");
    if (dim < 0) dim = static_cast<Index>(f.size());
    if (static_cast<Index>(f.size()) != dim)
      throw ValidationError("feature vector length differs from the first record");
    const auto row = static_cast<Index>(stars.size());
    for (Index k = 0; k < dim; ++k) {
      const double v = f[static_cast<std::size_t>(k)].get<double>();
      if (v != 0.0) entries.emplace_back(row, k, v);
    }
    int s = 0;
    if (j.contains("stars"))
      s = j.at("stars").get<int>();
    else
      s = j.at("label").get<int>() == 1 ? 5 : 1;
    stars.push_back(s);
    out.data.categories.push_back(parse_category(j.value("category", std::string("A"))));
  });

  if (mode == 2) {
    const std::size_t before = reviews.size();
    reviews = filter_reviews(std::move(reviews));
    out.filtered_out = before - reviews.size();
    out.is_text = true;
    out.data.stars.resize(static_cast<Index>(reviews.size()));
    out.data.features = FeatureMatrix(0, 0);
    for (std::size_t i = 0; i < reviews.size(); ++i) {
      out.data.stars[static_cast<Index>(i)] = reviews[i].stars;
      out.data.categories.push_back(reviews[i].category);
      out.data.texts.push_back(std::move(reviews[i].text));
    }
  } else {
    const auto n = static_cast<Index>(stars.size());
    out.data.features = FeatureMatrix(n, std::max<Index>(dim, 0));
    out.data.features.setFromTriplets(entries.begin(), entries.end());
    out.data.features.makeCompressed();
    out.data.stars = Eigen::Map<LabelVector>(stars.data(), n);
  }
  if (out.data.size() == 0) throw EmptyDatasetError("dataset contains no usable records");
  out.data.validate();
  return out;
}

LoadedDataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset '" + path + "'");
  return read_dataset_jsonl(in);
}

}  // namespace shiftbench
