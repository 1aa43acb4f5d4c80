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

#include "core/ratings.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "core/error.hpp"

namespace pinlf {

std::string_view delimiter_token(Delimiter d) {
  switch (d) {
    case Delimiter::Tab:
      return "\t";
    case Delimiter::Comma:
      return ",";
    case Delimiter::DoubleColon:
      return "::";
  }
  return "\t";
}

namespace {

struct SvHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

using IdMap =
    std::unordered_map<std::string, std::uint32_t, SvHash, std::equal_to<>>;

void split_fields(std::string_view line, std::string_view delim,
                  std::vector<std::string_view>& out) {
  out.clear();
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = line.find(delim, pos);
    if (hit == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return;
    }
    out.push_back(line.substr(pos, hit - pos));
    pos = hit + delim.size();
  }
}

double parse_value(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("non-numeric value '" + std::string(tok) + "'", line_no);
  if (!std::isfinite(v))
    throw ParseError("non-finite value '" + std::string(tok) + "'", line_no);
  return v;
}

std::uint32_t intern(IdMap& map, std::vector<std::string>& ids,
                     std::string_view tok) {
  auto it = map.find(tok);
  if (it != map.end()) return it->second;
  std::uint32_t idx = static_cast<std::uint32_t>(ids.size());
  ids.emplace_back(tok);
  map.emplace(ids.back(), idx);
  return idx;
}

}  // namespace

ParsedRatings parse_ratings(std::string_view text, const FormatSpec& fmt) {
  const std::string_view delim = delimiter_token(fmt.delim);
  const int need = std::max({fmt.row_field, fmt.col_field, fmt.value_field});

  ParsedRatings out;
  IdMap row_map;
  IdMap col_map;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool skip_header = fmt.has_header;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    if (skip_header) {
      skip_header = false;
      continue;
    }
    split_fields(line, delim, fields);
    if (static_cast<int>(fields.size()) <= need)
      throw ParseError("expected at least " + std::to_string(need + 1) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no);
    double value = parse_value(fields[fmt.value_field], line_no);
    if (value < 0.0)
      throw DataError("line " + std::to_string(line_no) + ": negative value " +
                      std::string(fields[fmt.value_field]));
    RatingTriple t;
    t.row = intern(row_map, out.row_ids, fields[fmt.row_field]);
    t.col = intern(col_map, out.col_ids, fields[fmt.col_field]);
    t.value = value;
    out.triples.push_back(t);
  }
  return out;
}

ParsedRatings parse_ratings_file(const std::string& path,
                                 const FormatSpec& fmt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path + "'");
  return parse_ratings(buf.str(), fmt);
}

std::string serialize_ratings(const ParsedRatings& data,
                              const FormatSpec& fmt) {
  const std::string_view delim = delimiter_token(fmt.delim);
  const int width = std::max({fmt.row_field, fmt.col_field, fmt.value_field}) + 1;
  std::vector<std::string> fields(width);

  std::string out;
  if (fmt.has_header) {
    for (int i = 0; i < width; ++i) fields[i] = "-";
    fields[fmt.row_field] = "row";
    fields[fmt.col_field] = "col";
    fields[fmt.value_field] = "value";
    for (int i = 0; i < width; ++i) {
      if (i) out += delim;
      out += fields[i];
    }
    out += '\n';
  }
  char num[32];
  for (const auto& t : data.triples) {
    for (int i = 0; i < width; ++i) fields[i] = "-";
    fields[fmt.row_field] = data.row_ids[t.row];
    fields[fmt.col_field] = data.col_ids[t.col];
    std::snprintf(num, sizeof num, "%.17g", t.value);
    fields[fmt.value_field] = num;
    for (int i = 0; i < width; ++i) {
      if (i) out += delim;
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace pinlf
