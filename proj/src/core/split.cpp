// Copyright 2026 The pinlf authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/split.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace pinlf {

namespace {
constexpr std::uint32_t kFolds = 10;
constexpr std::uint32_t kValidationFold = 7;
}  // namespace

SplitAssignment split_tenfold(const HdiMatrix& data, std::uint64_t seed,
                              std::uint32_t rotation) {
  const std::uint32_t n = data.n_entries();
  if (n < kFolds)
    throw DataError("need at least 10 entries to split, have " +
                    std::to_string(n));
  if (rotation > 4)
    throw DataError("rotation must be in 0..4, got " +
                    std::to_string(rotation));

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  seeded_shuffle(order, seed + rotation);

  SplitAssignment out;
  out.seed = seed;
  out.rotation = rotation;
  out.fold_of_entry.assign(n, 0);

  // First (n mod 10) folds take ceil(n/10) entries, the rest floor(n/10).
  const std::uint32_t base = n / kFolds;
  const std::uint32_t extra = n % kFolds;
  std::size_t pos = 0;
  for (std::uint32_t fold = 0; fold < kFolds; ++fold) {
    std::uint32_t size = base + (fold < extra ? 1 : 0);
    for (std::uint32_t i = 0; i < size; ++i)
      out.fold_of_entry[order[pos++]] = static_cast<std::uint8_t>(fold);
  }

  for (std::uint32_t id = 0; id < n; ++id) {
    std::uint8_t fold = out.fold_of_entry[id];
    if (fold < kValidationFold)
      out.train.push_back(id);
    else if (fold == kValidationFold)
      out.validation.push_back(id);
    else
      out.test.push_back(id);
  }
  return out;
}

void write_split_manifest(const SplitAssignment& split, const HdiMatrix& data,
                          const std::string& dataset_path,
                          const std::string& out_path) {
  std::vector<std::uint64_t> fold_sizes(kFolds, 0);
  for (std::uint8_t f : split.fold_of_entry) ++fold_sizes[f];

  nlohmann::json j;
  j["seed"] = split.seed;
  j["rotation"] = split.rotation;
  j["fold_sizes"] = fold_sizes;
  j["train_size"] = split.train.size();
  j["validation_size"] = split.validation.size();
  j["test_size"] = split.test.size();
  j["dataset"] = {{"path", dataset_path},
                  {"digest", data.content_digest()},
                  {"rows", data.n_rows()},
                  {"cols", data.n_cols()},
                  {"entries", data.n_entries()}};

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + out_path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed on '" + out_path + "'");
}

}  // namespace pinlf
