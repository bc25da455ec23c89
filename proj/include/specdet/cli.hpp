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

#ifndef SPECDET_CLI_HPP_
#define SPECDET_CLI_HPP_

#include <iosfwd>
#include <string_view>

namespace specdet::cli {

inline constexpr std::string_view kVersion = "1.0.0";

/// Parses argv and runs one subcommand. Results go to `out` (or the files
/// named by flags), diagnostics to `err`. Returns 0 on success, 1 for usage
/// errors, 2 for bad input data, 3 when a host capability is missing and 4
/// for internal errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace specdet::cli

#endif  // SPECDET_CLI_HPP_
