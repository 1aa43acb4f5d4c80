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

#include "core/factors.hpp"

#include <cmath>
#include <cstdio>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace pinlf {

FactorPair init_factors(std::uint32_t n_rows, std::uint32_t n_cols,
                        std::uint32_t f, std::uint64_t seed, double lo,
                        double hi) {
  if (f < 1) throw DataError("latent dimension must be at least 1");
  if (lo < 0.0) throw DataError("init range must be non-negative");
  if (!(lo < hi)) throw DataError("init range must satisfy lo < hi");

  FactorPair pair;
  pair.f = f;
  pair.X = Matrix(n_rows, f);
  pair.Y = Matrix(n_cols, f);

  SplitMix64 rng(seed);
  for (std::uint32_t m = 0; m < n_rows; ++m) {
    double* row = pair.X.row(m);
    for (std::uint32_t d = 0; d < f; ++d) row[d] = rng.uniform(lo, hi);
  }
  for (std::uint32_t n = 0; n < n_cols; ++n) {
    double* row = pair.Y.row(n);
    for (std::uint32_t d = 0; d < f; ++d) row[d] = rng.uniform(lo, hi);
  }
  return pair;
}

double predict(const FactorPair& pair, std::uint32_t m, std::uint32_t n) {
  if (m >= pair.X.rows() || n >= pair.Y.rows()) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "prediction index (%u, %u) out of range",
                  static_cast<unsigned>(m), static_cast<unsigned>(n));
    throw DataError(buf);
  }
  return detail::dot(pair.X.row(m), pair.Y.row(n), pair.f);
}

double objective(const FactorPair& pair, const HdiMatrix& data,
                 std::span<const std::uint32_t> entry_ids, double lambda) {
  const auto& entries = data.entries();
  double total = 0.0;
  for (std::uint32_t id : entry_ids) {
    const RatingTriple& e = entries[id];
    const double* xm = pair.X.row(e.row);
    const double* yn = pair.Y.row(e.col);
    const double err = e.value - detail::dot(xm, yn, pair.f);
    double norms = 0.0;
    for (std::uint32_t d = 0; d < pair.f; ++d)
      norms += xm[d] * xm[d] + yn[d] * yn[d];
    total += err * err + lambda * norms;
  }
  return total;
}

double rmse(const FactorPair& pair, const HdiMatrix& data,
            std::span<const std::uint32_t> entry_ids) {
  if (entry_ids.empty()) throw DataError("RMSE over an empty entry set");
  const auto& entries = data.entries();
  double sq = 0.0;
  for (std::uint32_t id : entry_ids) {
    const RatingTriple& e = entries[id];
    const double err =
        e.value - detail::dot(pair.X.row(e.row), pair.Y.row(e.col), pair.f);
    sq += err * err;
  }
  return std::sqrt(sq / static_cast<double>(entry_ids.size()));
}

}  // namespace pinlf
