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

#ifndef PINLF_CORE_HDI_HPP
#define PINLF_CORE_HDI_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pinlf {

// One known interaction of a high-dimensional-and-incomplete matrix.
// Unknown cells are missing, not zero.
struct RatingTriple {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;  // >= 0

  friend bool operator==(const RatingTriple&, const RatingTriple&) = default;
};

// Sparse known-entry set of an M x N matrix, dual-indexed: entries are kept
// sorted by (row, col) with per-row offsets, and a column-major permutation
// gives the per-column view. Immutable once built; safe to share across
// threads.
class HdiMatrix {
 public:
  HdiMatrix() = default;

  // Dimensions inferred from the largest indices present.
  // Throws DataError on a duplicate (row, col) pair.
  static HdiMatrix build(std::vector<RatingTriple> triples);

  // Explicit dimensions; every index must fit.
  static HdiMatrix build(std::vector<RatingTriple> triples,
                         std::uint32_t n_rows, std::uint32_t n_cols);

  std::uint32_t n_rows() const { return n_rows_; }
  std::uint32_t n_cols() const { return n_cols_; }
  std::uint32_t n_entries() const {
    return static_cast<std::uint32_t>(entries_.size());
  }
  double density() const;

  const std::vector<RatingTriple>& entries() const { return entries_; }
  const RatingTriple& entry(std::uint32_t id) const { return entries_[id]; }

  // Entries of row m, ascending column.
  std::span<const RatingTriple> row_slice(std::uint32_t m) const {
    return {entries_.data() + row_ptr_[m],
            entries_.data() + row_ptr_[m + 1]};
  }

  // Entry ids of column n, ascending row.
  std::span<const std::uint32_t> col_slice(std::uint32_t n) const {
    return {col_entries_.data() + col_ptr_[n],
            col_entries_.data() + col_ptr_[n + 1]};
  }

  // Same dimensions, entries narrowed to the given ascending entry ids.
  HdiMatrix restrict_to(std::span<const std::uint32_t> ids) const;

  // FNV-1a over dimensions and entry contents, as a lowercase hex string.
  // Identifies the dataset in manifests and run ids.
  std::string content_digest() const;

 private:
  static HdiMatrix build_impl(std::vector<RatingTriple> triples,
                              std::uint32_t n_rows, std::uint32_t n_cols);

  std::uint32_t n_rows_ = 0;
  std::uint32_t n_cols_ = 0;
  std::vector<RatingTriple> entries_;       // sorted by (row, col)
  std::vector<std::uint32_t> row_ptr_;      // n_rows_ + 1 offsets
  std::vector<std::uint32_t> col_ptr_;      // n_cols_ + 1 offsets
  std::vector<std::uint32_t> col_entries_;  // entry ids sorted by (col, row)
};

}  // namespace pinlf

#endif  // PINLF_CORE_HDI_HPP
