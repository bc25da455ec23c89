/*
 * Copyright 2026 The SpecDet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPECDET_TEXT_UTIL_HPP_
#define SPECDET_TEXT_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace specdet {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

// Strict full-string parses; return false on any trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_u64(std::string_view text, std::uint64_t& out);
bool parse_i64(std::string_view text, std::int64_t& out);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string> split_lines(std::string_view text);
std::string_view trim(std::string_view text);

// RFC 4180 style field splitting/quoting for one CSV record.
std::vector<std::string> split_csv_record(std::string_view line);
std::string quote_csv_field(std::string_view field);

}  // namespace specdet

#endif  // SPECDET_TEXT_UTIL_HPP_
