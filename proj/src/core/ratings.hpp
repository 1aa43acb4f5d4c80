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

#ifndef PINLF_CORE_RATINGS_HPP
#define PINLF_CORE_RATINGS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "core/hdi.hpp"

namespace pinlf {

enum class Delimiter { Tab, Comma, DoubleColon };

// Shape of a delimited rating file: field separator, which fields hold the
// row id, column id and value, and whether a header line leads the file.
// Fields beyond the named ones (timestamps and the like) are ignored.
struct FormatSpec {
  Delimiter delim = Delimiter::Tab;
  int row_field = 0;
  int col_field = 1;
  int value_field = 2;
  bool has_header = false;
};

// Triples carry dense 0-based indices; row_ids/col_ids map an index back to
// the external id token it replaced. Indices are assigned in first-seen
// order, so re-parsing the serialized form reproduces them.
struct ParsedRatings {
  std::vector<RatingTriple> triples;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
};

// Throws ParseError (with line number) on malformed lines and DataError on
// negative values. Blank lines are skipped.
ParsedRatings parse_ratings(std::string_view text, const FormatSpec& fmt);
ParsedRatings parse_ratings_file(const std::string& path,
                                 const FormatSpec& fmt);

// Inverse of parse_ratings, for fixtures and audits: one line per triple,
// external ids taken from the parse maps.
std::string serialize_ratings(const ParsedRatings& data, const FormatSpec& fmt);

std::string_view delimiter_token(Delimiter d);

}  // namespace pinlf

#endif  // PINLF_CORE_RATINGS_HPP
