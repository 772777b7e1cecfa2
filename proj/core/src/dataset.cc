//
// Copyright 2026 The ggdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "ggdp/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "ggdp/errors.h"

namespace ggdp {
namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool ParseDouble(const std::string& s, double& out) {
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (...) {
    return false;
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) {
    ++used;
  }
  return used == s.size();
}

}  // namespace

double Dataset::MajorityRate() const {
  if (labels.empty()) return 0.0;
  std::map<int, std::size_t> freq;
  for (int l : labels) ++freq[l];
  std::size_t best = 0;
  for (const auto& [label, n] : freq) best = std::max(best, n);
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

Dataset LoadDatasetCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset " + path);
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    double probe = 0.0;
    if (data.labels.empty() && data.num_features == 0 &&
        !ParseDouble(fields.front(), probe)) {
      continue;  // header
    }
    if (fields.size() < 2) {
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": need at least one feature and a label");
    }
    if (data.num_features == 0) {
      data.num_features = fields.size() - 1;
    } else if (fields.size() - 1 != data.num_features) {
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(data.num_features + 1) +
                       " columns");
    }
    for (std::size_t c = 0; c + 1 < fields.size(); ++c) {
      double v = 0.0;
      if (!ParseDouble(fields[c], v) || !std::isfinite(v)) {
        throw InputError(path + ":" + std::to_string(line_no) +
                         ": bad feature value '" + fields[c] + "'");
      }
      data.features.push_back(v);
    }
    double label = 0.0;
    if (!ParseDouble(fields.back(), label) || label < 0 ||
        label != std::floor(label)) {
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": label must be a non-negative integer");
    }
    data.labels.push_back(static_cast<int>(label));
    max_label = std::max(max_label, static_cast<int>(label));
  }
  if (data.labels.empty()) throw InputError(path + ": no data rows");
  data.num_classes = std::max(2, max_label + 1);
  return data;
}

void SaveDatasetCsv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out.precision(17);
  for (std::size_t f = 0; f < data.num_features; ++f) out << "x" << f << ",";
  out << "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) out << v << ",";
    out << data.labels[i] << "\n";
  }
}

Dataset MakeGaussianBlobs(std::size_t count, std::size_t dimension,
                          double separation, Rng& rng) {
  if (count < 2 || dimension < 1) {
    throw ParameterError("blobs need >= 2 points and >= 1 feature");
  }
  Dataset data;
  data.num_features = dimension;
  data.num_classes = 2;
  data.labels.resize(count);
  for (std::size_t i = 0; i < count; ++i) data.labels[i] = static_cast<int>(i % 2);
  std::shuffle(data.labels.begin(), data.labels.end(), rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double shift = 0.5 * separation / std::sqrt(static_cast<double>(dimension));
  data.features.resize(count * dimension);
  for (std::size_t i = 0; i < count; ++i) {
    const double sign = data.labels[i] == 1 ? 1.0 : -1.0;
    for (std::size_t f = 0; f < dimension; ++f) {
      data.features[i * dimension + f] = sign * shift + normal(rng);
    }
  }
  return data;
}

}  // namespace ggdp
