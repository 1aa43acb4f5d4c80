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

#include "core/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "core/error.hpp"

namespace pinlf {

namespace {

constexpr char kModelMagic[8] = {'P', 'I', 'N', 'L', 'F', 'M', 'D', '1'};
constexpr char kStateMagic[8] = {'P', 'I', 'N', 'L', 'F', 'S', 'T', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) |
         static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 |
         static_cast<std::uint32_t>(b[3]) << 24;
}

void put_doubles(std::ostream& out, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(v[i]);
    char b[8];
    for (int j = 0; j < 8; ++j) b[j] = static_cast<char>(bits >> (8 * j));
    out.write(b, 8);
  }
}

void get_doubles(std::istream& in, double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int j = 0; j < 8; ++j)
      bits |= static_cast<std::uint64_t>(b[j]) << (8 * j);
    v[i] = std::bit_cast<double>(bits);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path, const char (&magic)[8],
                      const char* kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char got[8];
  in.read(got, 8);
  if (!in || std::memcmp(got, magic, 8) != 0)
    throw IoError(path + " is not a pinlf " + kind + " file");
  return in;
}

void put_pair(std::ostream& out, const FactorPair& factors) {
  put_u32(out, static_cast<std::uint32_t>(factors.X.rows()));
  put_u32(out, static_cast<std::uint32_t>(factors.Y.rows()));
  put_u32(out, factors.f);
  put_doubles(out, factors.X.data(), factors.X.size());
  put_doubles(out, factors.Y.data(), factors.Y.size());
}

FactorPair get_pair(std::istream& in) {
  FactorPair factors;
  const std::uint32_t rows = get_u32(in);
  const std::uint32_t cols = get_u32(in);
  factors.f = get_u32(in);
  if (!in || factors.f < 1) throw IoError("corrupt checkpoint header");
  factors.X = Matrix(rows, factors.f);
  factors.Y = Matrix(cols, factors.f);
  get_doubles(in, factors.X.data(), factors.X.size());
  get_doubles(in, factors.Y.data(), factors.Y.size());
  return factors;
}

}  // namespace

void save_model(const FactorPair& factors, const std::string& path) {
  auto out = open_out(path);
  out.write(kModelMagic, 8);
  put_pair(out, factors);
  if (!out) throw IoError("failed writing " + path);
}

FactorPair load_model(const std::string& path) {
  auto in = open_in(path, kModelMagic, "model");
  FactorPair factors = get_pair(in);
  if (!in) throw IoError("truncated model file " + path);
  return factors;
}

void save_train_state(const TrainState& state, const std::string& path) {
  auto out = open_out(path);
  out.write(kStateMagic, 8);
  put_pair(out, state.factors);
  put_doubles(out, state.acc.sum_x.data(), state.acc.sum_x.size());
  put_doubles(out, state.acc.sum_y.data(), state.acc.sum_y.size());
  put_u32(out, state.iteration);
  if (!out) throw IoError("failed writing " + path);
}

TrainState load_train_state(const std::string& path) {
  auto in = open_in(path, kStateMagic, "train state");
  TrainState state;
  state.factors = get_pair(in);
  state.acc.sum_x = Matrix(state.factors.X.rows(), state.factors.f);
  state.acc.sum_y = Matrix(state.factors.Y.rows(), state.factors.f);
  get_doubles(in, state.acc.sum_x.data(), state.acc.sum_x.size());
  get_doubles(in, state.acc.sum_y.data(), state.acc.sum_y.size());
  state.iteration = get_u32(in);
  if (!in) throw IoError("truncated train state file " + path);
  return state;
}

}  // namespace pinlf
