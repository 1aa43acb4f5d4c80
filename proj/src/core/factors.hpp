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

#ifndef PINLF_CORE_FACTORS_HPP
#define PINLF_CORE_FACTORS_HPP

#include <cstdint>
#include <span>

#include "core/hdi.hpp"
#include "core/matrix.hpp"

namespace pinlf {

struct Hyperparams {
  double lambda = 0.08;  // regularization coefficient, >= 0
  double kp = 1.0;       // proportional gain
  double ki = 0.0;       // integral gain
};

// Non-negative latent factor matrices: X is n_rows x f, Y is n_cols x f.
// The product X Y^T approximates the data on its known entries.
struct FactorPair {
  Matrix X;
  Matrix Y;
  std::uint32_t f = 0;

  friend bool operator==(const FactorPair&, const FactorPair&) = default;
};

// Entries drawn i.i.d. uniform on [lo, hi) from a single SplitMix64 stream,
// X row-major then Y row-major. Same seed, same factors, bit for bit.
// Requires 0 <= lo < hi and f >= 1.
FactorPair init_factors(std::uint32_t n_rows, std::uint32_t n_cols,
                        std::uint32_t f, std::uint64_t seed, double lo,
                        double hi);

// Inner product of X row m and Y row n. Throws DataError on out-of-range
// indices.
double predict(const FactorPair& pair, std::uint32_t m, std::uint32_t n);

// Regularized squared error over the given entry ids:
//   sum over entries of (r - rhat)^2 + lambda (|X_m|^2 + |Y_n|^2).
// The regularizer rides inside the per-entry sum, so a row with many known
// entries is damped proportionally harder.
double objective(const FactorPair& pair, const HdiMatrix& data,
                 std::span<const std::uint32_t> entry_ids, double lambda);

// Root mean squared error over the given entry ids; they must be non-empty.
double rmse(const FactorPair& pair, const HdiMatrix& data,
            std::span<const std::uint32_t> entry_ids);

namespace detail {
inline double dot(const double* a, const double* b, std::uint32_t f) {
  double s = 0.0;
  for (std::uint32_t d = 0; d < f; ++d) s += a[d] * b[d];
  return s;
}
}  // namespace detail

}  // namespace pinlf

#endif  // PINLF_CORE_FACTORS_HPP
