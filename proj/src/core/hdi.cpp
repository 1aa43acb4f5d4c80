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

#include "core/hdi.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>

#include "core/error.hpp"

namespace pinlf {

HdiMatrix HdiMatrix::build(std::vector<RatingTriple> triples) {
  std::uint32_t n_rows = 0;
  std::uint32_t n_cols = 0;
  for (const auto& t : triples) {
    n_rows = std::max(n_rows, t.row + 1);
    n_cols = std::max(n_cols, t.col + 1);
  }
  return build_impl(std::move(triples), n_rows, n_cols);
}

HdiMatrix HdiMatrix::build(std::vector<RatingTriple> triples,
                           std::uint32_t n_rows, std::uint32_t n_cols) {
  for (const auto& t : triples) {
    if (t.row >= n_rows || t.col >= n_cols)
      throw DataError("entry (" + std::to_string(t.row) + ", " +
                      std::to_string(t.col) + ") outside " +
                      std::to_string(n_rows) + "x" + std::to_string(n_cols));
  }
  return build_impl(std::move(triples), n_rows, n_cols);
}

HdiMatrix HdiMatrix::build_impl(std::vector<RatingTriple> triples,
                                std::uint32_t n_rows, std::uint32_t n_cols) {
  std::sort(triples.begin(), triples.end(),
            [](const RatingTriple& a, const RatingTriple& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t i = 1; i < triples.size(); ++i) {
    if (triples[i].row == triples[i - 1].row &&
        triples[i].col == triples[i - 1].col)
      throw DataError("duplicate entry at (" + std::to_string(triples[i].row) +
                      ", " + std::to_string(triples[i].col) + ")");
  }

  HdiMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.entries_ = std::move(triples);

  m.row_ptr_.assign(n_rows + 1, 0);
  for (const auto& t : m.entries_) ++m.row_ptr_[t.row + 1];
  for (std::uint32_t r = 0; r < n_rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];

  // Counting sort of entry ids by column; the row-major source order makes
  // each column slice ascend by row.
  m.col_ptr_.assign(n_cols + 1, 0);
  for (const auto& t : m.entries_) ++m.col_ptr_[t.col + 1];
  for (std::uint32_t c = 0; c < n_cols; ++c) m.col_ptr_[c + 1] += m.col_ptr_[c];
  m.col_entries_.resize(m.entries_.size());
  std::vector<std::uint32_t> fill(m.col_ptr_.begin(), m.col_ptr_.end() - 1);
  for (std::uint32_t id = 0; id < m.entries_.size(); ++id)
    m.col_entries_[fill[m.entries_[id].col]++] = id;

  return m;
}

double HdiMatrix::density() const {
  if (n_rows_ == 0 || n_cols_ == 0) return 0.0;
  return static_cast<double>(entries_.size()) /
         (static_cast<double>(n_rows_) * static_cast<double>(n_cols_));
}

HdiMatrix HdiMatrix::restrict_to(std::span<const std::uint32_t> ids) const {
  std::vector<RatingTriple> sub;
  sub.reserve(ids.size());
  for (std::uint32_t id : ids) sub.push_back(entries_[id]);
  return build(std::move(sub), n_rows_, n_cols_);
}

std::string HdiMatrix::content_digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a offset basis
  auto mix = [&h](const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(&n_rows_, sizeof n_rows_);
  mix(&n_cols_, sizeof n_cols_);
  for (const auto& t : entries_) {
    mix(&t.row, sizeof t.row);
    mix(&t.col, sizeof t.col);
    std::uint64_t bits;
    std::memcpy(&bits, &t.value, sizeof bits);
    mix(&bits, sizeof bits);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pinlf
