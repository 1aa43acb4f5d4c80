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

#ifndef PINLF_CORE_CHECKPOINT_HPP
#define PINLF_CORE_CHECKPOINT_HPP

#include <string>

#include "core/factors.hpp"
#include "core/solver.hpp"

namespace pinlf {

// Binary checkpoint files, little-endian, with an 8-byte magic:
//   PINLFMD1  model — shape header (rows, cols, f) then X and Y row-major
//   PINLFST1  train state — model plus both accumulators and the iteration
// Round-trips are bit-exact, so a resumed run replays identically.

void save_model(const FactorPair& factors, const std::string& path);
FactorPair load_model(const std::string& path);

void save_train_state(const TrainState& state, const std::string& path);
TrainState load_train_state(const std::string& path);

}  // namespace pinlf

#endif  // PINLF_CORE_CHECKPOINT_HPP
