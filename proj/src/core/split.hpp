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

#ifndef PINLF_CORE_SPLIT_HPP
#define PINLF_CORE_SPLIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/hdi.hpp"

namespace pinlf {

// Ten disjoint folds over the known entries: folds 0-6 train, fold 7
// validation, folds 8-9 test. Entry-id sets are kept sorted ascending.
struct SplitAssignment {
  std::uint64_t seed = 0;
  std::uint32_t rotation = 0;
  std::vector<std::uint8_t> fold_of_entry;  // one label in 0..9 per entry
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> validation;
  std::vector<std::uint32_t> test;
};

// Seeded Fisher-Yates shuffle of the entry ids, then contiguous blocks of
// size ceil(n/10) or floor(n/10). Each rotation in 0..4 reshuffles with
// (seed + rotation), giving five independent repetitions of the ten-way
// split. Requires at least 10 entries.
SplitAssignment split_tenfold(const HdiMatrix& data, std::uint64_t seed,
                              std::uint32_t rotation);

// JSON audit record: seed, rotation, fold sizes, set sizes, and the dataset
// identity (path may be empty for in-memory data).
void write_split_manifest(const SplitAssignment& split, const HdiMatrix& data,
                          const std::string& dataset_path,
                          const std::string& out_path);

}  // namespace pinlf

#endif  // PINLF_CORE_SPLIT_HPP
