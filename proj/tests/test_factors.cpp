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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "core/error.hpp"
#include "core/factors.hpp"
#include "core/hdi.hpp"
#include "core/rng.hpp"
#include "oracle/dense_oracle.hpp"
#include "support/instances.hpp"

using namespace pinlf;
using pinlf_tests::all_entry_ids;
using pinlf_tests::random_instance;
using pinlf_tests::to_dense;

TEST_CASE("init_factors draws one stream, X rows first, in range") {
  const FactorPair pair = init_factors(3, 2, 4, 99, 0.0, 0.5);
  CHECK(pair.f == 4);
  CHECK(pair.X.rows() == 3);
  CHECK(pair.X.cols() == 4);
  CHECK(pair.Y.rows() == 2);
  CHECK(pair.Y.cols() == 4);

  // Replay the documented stream: a single SplitMix64 seeded identically,
  // X row-major then Y row-major.
  SplitMix64 rng(99);
  for (std::size_t i = 0; i < pair.X.size(); ++i)
    CHECK(pair.X.data()[i] == rng.uniform(0.0, 0.5));
  for (std::size_t i = 0; i < pair.Y.size(); ++i)
    CHECK(pair.Y.data()[i] == rng.uniform(0.0, 0.5));

  for (std::size_t i = 0; i < pair.X.size(); ++i) {
    CHECK(pair.X.data()[i] >= 0.0);
    CHECK(pair.X.data()[i] < 0.5);
  }

  CHECK(init_factors(3, 2, 4, 99, 0.0, 0.5) == pair);
  CHECK(init_factors(3, 2, 4, 100, 0.0, 0.5) != pair);
}

TEST_CASE("init_factors rejects bad shapes and ranges") {
  CHECK_THROWS_AS(init_factors(3, 2, 0, 1, 0.0, 0.5), DataError);
  CHECK_THROWS_AS(init_factors(3, 2, 1, 1, -0.1, 0.5), DataError);
  CHECK_THROWS_AS(init_factors(3, 2, 1, 1, 0.5, 0.5), DataError);
  CHECK_THROWS_AS(init_factors(3, 2, 1, 1, 0.6, 0.5), DataError);
}

TEST_CASE("predict is the factor inner product and checks bounds") {
  FactorPair pair;
  pair.f = 2;
  pair.X = Matrix(2, 2);
  pair.Y = Matrix(2, 2);
  pair.X(0, 0) = 1.0;
  pair.X(0, 1) = 2.0;
  pair.Y(1, 0) = 3.0;
  pair.Y(1, 1) = 0.5;

  CHECK(predict(pair, 0, 1) == 4.0);
  CHECK(predict(pair, 1, 1) == 0.0);

  // Bilinear: scaling one X row scales its predictions.
  pair.X(0, 0) *= 3.0;
  pair.X(0, 1) *= 3.0;
  CHECK(predict(pair, 0, 1) == 12.0);

  CHECK_THROWS_AS(predict(pair, 2, 0), DataError);
  CHECK_THROWS_AS(predict(pair, 0, 2), DataError);
}

TEST_CASE("objective matches the dense oracle on random instances") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const pinlf_tests::SmallInstance inst = random_instance(seed);
    const FactorPair pair =
        init_factors(inst.sparse.n_rows(), inst.sparse.n_cols(), 3,
                     seed * 13 + 1, 0.0, 0.5);
    const auto x = to_dense(pair.X);
    const auto y = to_dense(pair.Y);
    const std::vector<std::uint32_t> ids = all_entry_ids(inst.sparse);

    for (double lambda : {0.0, 0.08}) {
      const double ours = objective(pair, inst.sparse, ids, lambda);
      const double oracle =
          pinlf_oracle::dense_objective(inst.dense, x, y, lambda);
      CHECK(std::abs(ours - oracle) <=
            1e-12 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST_CASE("objective puts the regularizer inside the per-entry sum") {
  // Single known cell r = 2 with scalar factors x = 3, y = 0.5:
  // (2 - 1.5)^2 + 0.1 (9 + 0.25) = 1.175.
  const HdiMatrix data = HdiMatrix::build({{0, 0, 2.0}});
  FactorPair pair;
  pair.f = 1;
  pair.X = Matrix(1, 1, 3.0);
  pair.Y = Matrix(1, 1, 0.5);
  const std::vector<std::uint32_t> ids = {0};
  CHECK(objective(pair, data, ids, 0.1) == doctest::Approx(1.175).epsilon(1e-15));

  // Two entries sharing row 0: the row norm is counted once per entry.
  const HdiMatrix two = HdiMatrix::build({{0, 0, 2.0}, {0, 1, 1.0}});
  FactorPair p2;
  p2.f = 1;
  p2.X = Matrix(1, 1, 3.0);
  p2.Y = Matrix(2, 1, 0.5);
  const std::vector<std::uint32_t> both = {0, 1};
  const std::vector<std::uint32_t> first = {0};
  const std::vector<std::uint32_t> second = {1};
  const double sum = objective(p2, two, first, 0.1) +
                     objective(p2, two, second, 0.1);
  CHECK(objective(p2, two, both, 0.1) == doctest::Approx(sum).epsilon(1e-15));
  // (2-1.5)^2 + .1(9.25) + (1-1.5)^2 + .1(9.25) = 0.25+0.925+0.25+0.925
  CHECK(objective(p2, two, both, 0.1) ==
        doctest::Approx(2.35).epsilon(1e-15));
}

TEST_CASE("rmse squares back to the unregularized objective") {
  for (std::uint64_t seed = 30; seed <= 40; ++seed) {
    const pinlf_tests::SmallInstance inst = random_instance(seed);
    if (inst.sparse.n_entries() == 0) continue;
    const FactorPair pair =
        init_factors(inst.sparse.n_rows(), inst.sparse.n_cols(), 2, seed,
                     0.0, 0.5);
    const std::vector<std::uint32_t> ids = all_entry_ids(inst.sparse);

    const double e = rmse(pair, inst.sparse, ids);
    const double obj = objective(pair, inst.sparse, ids, 0.0);
    CHECK(std::abs(e * e * static_cast<double>(ids.size()) - obj) <=
          1e-12 * std::max(1.0, obj));
  }
}

TEST_CASE("rmse rejects an empty entry set") {
  const HdiMatrix data = HdiMatrix::build({{0, 0, 1.0}});
  const FactorPair pair = init_factors(1, 1, 1, 1, 0.0, 0.5);
  const std::vector<std::uint32_t> none;
  CHECK_THROWS_AS(rmse(pair, data, none), DataError);
}
