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

#ifndef GGDP_DATASET_H_
#define GGDP_DATASET_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ggdp/random.h"

namespace ggdp {

// Dense labelled dataset, features stored row-major.
struct Dataset {
  std::size_t num_features = 0;
  int num_classes = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * num_features, num_features};
  }
  // Fraction of the most common label.
  double MajorityRate() const;
};

// CSV with feature columns followed by an integer label column. A header
// row is skipped when its first field is not numeric. Throws InputError
// naming the offending line.
Dataset LoadDatasetCsv(const std::string& path);
void SaveDatasetCsv(const Dataset& data, const std::string& path);

// Two Gaussian blobs N(+-separation/2 * u, I_d), u = (1,...,1)/sqrt(d),
// balanced labels in random order.
Dataset MakeGaussianBlobs(std::size_t count, std::size_t dimension,
                          double separation, Rng& rng);

}  // namespace ggdp

#endif  // GGDP_DATASET_H_
