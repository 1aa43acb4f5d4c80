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

#ifndef PINLF_TESTS_SUPPORT_INSTANCES_HPP
#define PINLF_TESTS_SUPPORT_INSTANCES_HPP

// Seeded fixture generators shared by the unit suites and the acceptance
// runner. These build inputs only; expected outputs come from the oracles.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "core/factors.hpp"
#include "core/hdi.hpp"
#include "core/matrix.hpp"
#include "core/rng.hpp"
#include "oracle/dense_oracle.hpp"

namespace pinlf_tests {

// The same instance in both representations, so solver and oracle read
// identical data.
struct SmallInstance {
  pinlf::HdiMatrix sparse;
  pinlf_oracle::DenseInstance dense;
};

// Dimensions 1..max_dim, per-cell density in [0.3, 0.95), values in [0, 5)
// with a sprinkling of exact zeros. Rows or columns may come out empty; the
// update must leave those factors alone.
inline SmallInstance random_instance(std::uint64_t seed,
                                     std::uint32_t max_dim = 8) {
  pinlf::SplitMix64 rng(seed);
  const auto m = static_cast<std::uint32_t>(1 + rng.bounded(max_dim));
  const auto n = static_cast<std::uint32_t>(1 + rng.bounded(max_dim));
  const double density = 0.3 + 0.65 * rng.uniform();

  SmallInstance inst;
  inst.dense = pinlf_oracle::DenseInstance(m, n);
  std::vector<pinlf::RatingTriple> triples;
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (rng.uniform() >= density) continue;
      double value = rng.uniform(0.0, 5.0);
      if (rng.uniform() < 0.1) value = 0.0;
      inst.dense.known[i][j] = 1;
      inst.dense.r[i][j] = value;
      triples.push_back({i, j, value});
    }
  }
  inst.sparse = pinlf::HdiMatrix::build(std::move(triples), m, n);
  return inst;
}

inline pinlf_oracle::DenseFactors to_dense(const pinlf::Matrix& m) {
  pinlf_oracle::DenseFactors out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

// Largest absolute difference between a solver matrix and an oracle matrix.
inline double max_abs_diff(const pinlf::Matrix& a,
                           const pinlf_oracle::DenseFactors& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const double d = a(r, c) - b[r][c];
      worst = std::max(worst, d < 0 ? -d : d);
    }
  return worst;
}

// Exactly factorizable data: ratings are inner products of uniform [0, 1)
// rank-`rank` factors, so values sit in [0, rank). Cells kept with the given
// probability.
inline pinlf::HdiMatrix synthetic_low_rank(std::uint32_t rows,
                                           std::uint32_t cols,
                                           std::uint32_t rank, double density,
                                           std::uint64_t seed) {
  pinlf::SplitMix64 rng(seed);
  pinlf::Matrix x(rows, rank);
  pinlf::Matrix y(cols, rank);
  for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform();
  for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] = rng.uniform();

  std::vector<pinlf::RatingTriple> triples;
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      if (rng.uniform() >= density) continue;
      double v = 0.0;
      for (std::uint32_t d = 0; d < rank; ++d) v += x(i, d) * y(j, d);
      triples.push_back({i, j, v});
    }
  }
  return pinlf::HdiMatrix::build(std::move(triples), rows, cols);
}

// Ratings-like data: a rank-`rank` signal whose factors sit in
// [factor_lo, factor_hi), plus a uniform observation-noise floor of
// [-noise, +noise), clamped at zero. Mimics the texture of recommender
// datasets: a strong positive mean, modest per-entry spread, and a
// generalization floor that no factorization can descend below.
inline pinlf::HdiMatrix synthetic_ratings(std::uint32_t rows,
                                          std::uint32_t cols,
                                          std::uint32_t rank, double density,
                                          std::uint64_t seed, double factor_lo,
                                          double factor_hi, double noise) {
  pinlf::SplitMix64 rng(seed);
  pinlf::Matrix x(rows, rank);
  pinlf::Matrix y(cols, rank);
  for (std::size_t i = 0; i < x.size(); ++i)
    x.data()[i] = rng.uniform(factor_lo, factor_hi);
  for (std::size_t i = 0; i < y.size(); ++i)
    y.data()[i] = rng.uniform(factor_lo, factor_hi);

  std::vector<pinlf::RatingTriple> triples;
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      if (rng.uniform() >= density) continue;
      double v = 0.0;
      for (std::uint32_t d = 0; d < rank; ++d) v += x(i, d) * y(j, d);
      v += rng.uniform(-noise, noise);
      if (v < 0.0) v = 0.0;
      triples.push_back({i, j, v});
    }
  }
  return pinlf::HdiMatrix::build(std::move(triples), rows, cols);
}

// Entry ids 0..n-1, the "evaluate on everything" span.
inline std::vector<std::uint32_t> all_entry_ids(const pinlf::HdiMatrix& data) {
  std::vector<std::uint32_t> ids(data.n_entries());
  for (std::uint32_t i = 0; i < data.n_entries(); ++i) ids[i] = i;
  return ids;
}

}  // namespace pinlf_tests

#endif  // PINLF_TESTS_SUPPORT_INSTANCES_HPP
