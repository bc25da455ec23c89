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

#ifndef SPECDET_CORPUS_HPP_
#define SPECDET_CORPUS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace specdet::corpus {

// Bumped whenever the directive list below changes.
inline constexpr int kDirectiveListVersion = 1;

// Assembler directives stripped by preprocess(). Any directive starting
// with ".cfi_" is stripped as well.
inline constexpr std::array<std::string_view, 9> kRemovedDirectives = {
    ".file", ".ident", ".section", ".text", ".globl",
    ".type", ".size",  ".align",   ".loc"};

bool is_removed_directive(std::string_view word);

/// Strips assembler bookkeeping from raw assembly text.
///
/// Comments (from '#' or ';'), path-like words (anything containing '/' or
/// '\\'), and file/section/format directives are removed; whitespace runs
/// collapse to one space and lines left empty are dropped. The result is a
/// fixed point: preprocess(preprocess(t)) == preprocess(t).
std::string preprocess(std::string_view raw_text);

/// Splits preprocessed text on whitespace and `, ( ) [ ] :` and lowercases
/// each piece. Separators never appear in the output.
std::vector<std::string> tokenize(std::string_view clean_text);

// One labeled assembly function (1 = victim, 0 = non-victim).
struct GadgetRecord {
  std::string id;
  int label = 0;
  std::string source;
  std::string raw_text;
  std::string clean_text;
  std::vector<std::string> tokens;

  static GadgetRecord from_text(std::string id, int label, std::string source,
                                std::string raw_text);

  friend bool operator==(const GadgetRecord&, const GadgetRecord&) = default;
};

class CorpusManifest {
 public:
  CorpusManifest() = default;
  // Throws DataError on duplicate ids or labels outside {0, 1}.
  explicit CorpusManifest(std::vector<GadgetRecord> records);

  const std::vector<GadgetRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  // class_counts()[label]
  const std::array<std::size_t, 2>& class_counts() const { return counts_; }

  void append(std::vector<GadgetRecord> more);

 private:
  std::vector<GadgetRecord> records_;
  std::array<std::size_t, 2> counts_{0, 0};
};

struct IngestLog {
  std::vector<std::string> warnings;
};

/// Reads every regular file under `dir` (recursively, lexicographic by path)
/// as one gadget. Files that are not text (NUL bytes or invalid UTF-8) are
/// skipped and reported in `log`. Ids are `<dir name>/<relative path>`.
std::vector<GadgetRecord> ingest_gadget_dir(const std::filesystem::path& dir,
                                            int label, IngestLog* log = nullptr);

// Line-delimited JSON, one record per line, fields in the fixed order
// id, label, source, raw_text, clean_text, tokens.
void write_manifest(std::ostream& out, const CorpusManifest& manifest);
void save_manifest(const std::filesystem::path& path, const CorpusManifest& manifest);
CorpusManifest read_manifest(std::istream& in);
CorpusManifest load_manifest(const std::filesystem::path& path);

}  // namespace specdet::corpus

#endif  // SPECDET_CORPUS_HPP_
