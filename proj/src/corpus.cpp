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

#include "specdet/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "specdet/error.hpp"
#include "specdet/text_util.hpp"

namespace specdet::corpus {
namespace {

constexpr std::string_view kWhitespace = " \t\r\v\f";
constexpr std::string_view kSeparators = " \t\r\v\f\n,()[]:";

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t b = line.find_first_not_of(kWhitespace, pos);
    if (b == std::string_view::npos) break;
    std::size_t e = line.find_first_of(kWhitespace, b);
    if (e == std::string_view::npos) e = line.size();
    words.push_back(line.substr(b, e - b));
    pos = e;
  }
  return words;
}

bool is_path_like(std::string_view word) {
  return word.find_first_of("/\\") != std::string_view::npos;
}

bool contains_directive_token(std::string_view word) {
  for (const auto& tok : tokenize(word)) {
    if (is_removed_directive(tok)) return true;
  }
  return false;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c == 0) return false;
    int extra;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c >> 5) == 0x6) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c >> 4) == 0xE) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c >> 3) == 0x1E) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (int k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && (cp < 0x10000 || cp > 0x10FFFF)) ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

}  // namespace

bool is_removed_directive(std::string_view word) {
  std::string lower = lowercase(word);
  if (lower.starts_with(".cfi_")) return true;
  return std::find(kRemovedDirectives.begin(), kRemovedDirectives.end(), lower) !=
         kRemovedDirectives.end();
}

std::string preprocess(std::string_view raw_text) {
  std::string out;
  std::size_t start = 0;
  while (start <= raw_text.size()) {
    std::size_t end = raw_text.find('\n', start);
    if (end == std::string_view::npos) end = raw_text.size();
    std::string_view line = raw_text.substr(start, end - start);
    start = end + 1;

    std::size_t comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);

    std::vector<std::string_view> words = split_words(line);
    std::erase_if(words, is_path_like);
    if (!words.empty() && is_removed_directive(words.front())) continue;
    std::erase_if(words, contains_directive_token);
    if (words.empty()) continue;

    if (!out.empty()) out.push_back('\n');
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) out.push_back(' ');
      out.append(words[i]);
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view clean_text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < clean_text.size()) {
    std::size_t b = clean_text.find_first_not_of(kSeparators, pos);
    if (b == std::string_view::npos) break;
    std::size_t e = clean_text.find_first_of(kSeparators, b);
    if (e == std::string_view::npos) e = clean_text.size();
    tokens.push_back(lowercase(clean_text.substr(b, e - b)));
    pos = e;
  }
  return tokens;
}

GadgetRecord GadgetRecord::from_text(std::string id, int label, std::string source,
                                     std::string raw_text) {
  GadgetRecord r;
  r.id = std::move(id);
  r.label = label;
  r.source = std::move(source);
  r.raw_text = std::move(raw_text);
  r.clean_text = preprocess(r.raw_text);
  r.tokens = tokenize(r.clean_text);
  return r;
}

CorpusManifest::CorpusManifest(std::vector<GadgetRecord> records) {
  append(std::move(records));
}

void CorpusManifest::append(std::vector<GadgetRecord> more) {
  std::set<std::string> ids;
  for (const auto& r : records_) ids.insert(r.id);
  for (const auto& r : more) {
    if (r.label != 0 && r.label != 1) {
      throw DataError("record " + r.id + ": label must be 0 or 1");
    }
    if (!ids.insert(r.id).second) throw DataError("duplicate record id " + r.id);
  }
  for (auto& r : more) {
    ++counts_[static_cast<std::size_t>(r.label)];
    records_.push_back(std::move(r));
  }
}

std::vector<GadgetRecord> ingest_gadget_dir(const std::filesystem::path& dir,
                                            int label, IngestLog* log) {
  namespace fs = std::filesystem;
  if (label != 0 && label != 1) throw UsageError("label must be 0 or 1");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("not a readable directory: " + dir.string());
  }
  std::vector<fs::path> files;
  fs::recursive_directory_iterator it(dir, ec), end;
  if (ec) throw IoError("cannot read directory " + dir.string() + ": " + ec.message());
  for (; it != end; it.increment(ec)) {
    if (ec) throw IoError("cannot read directory " + dir.string() + ": " + ec.message());
    if (it->is_regular_file(ec)) files.push_back(it->path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.generic_string() < b.generic_string();
  });

  fs::path base = dir.lexically_normal();
  if (base.filename().empty()) base = base.parent_path();
  const std::string prefix = base.filename().generic_string();

  std::vector<GadgetRecord> records;
  records.reserve(files.size());
  for (const auto& file : files) {
    std::string text;
    try {
      text = read_file(file);
    } catch (const IoError& e) {
      if (log) log->warnings.push_back(std::string("skipped unreadable file: ") + e.what());
      continue;
    }
    if (!is_valid_utf8(text)) {
      if (log) log->warnings.push_back("skipped non-text file: " + file.string());
      continue;
    }
    std::string rel = file.lexically_relative(base).generic_string();
    records.push_back(GadgetRecord::from_text(prefix + "/" + rel, label,
                                              file.generic_string(), std::move(text)));
  }
  return records;
}

void write_manifest(std::ostream& out, const CorpusManifest& manifest) {
  for (const auto& r : manifest.records()) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["label"] = r.label;
    j["source"] = r.source;
    j["raw_text"] = r.raw_text;
    j["clean_text"] = r.clean_text;
    j["tokens"] = r.tokens;
    out << j.dump() << '\n';
  }
}

void save_manifest(const std::filesystem::path& path, const CorpusManifest& manifest) {
  std::ostringstream ss;
  write_manifest(ss, manifest);
  write_file(path, ss.str());
}

CorpusManifest read_manifest(std::istream& in) {
  std::vector<GadgetRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "manifest line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
    GadgetRecord r;
    try {
      r.id = j.at("id").get<std::string>();
      r.label = j.at("label").get<int>();
      r.source = j.at("source").get<std::string>();
      r.raw_text = j.at("raw_text").get<std::string>();
      r.clean_text = j.at("clean_text").get<std::string>();
      r.tokens = j.at("tokens").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
    if (tokenize(r.clean_text) != r.tokens) {
      throw DataError(where + ": tokens do not match clean_text");
    }
    records.push_back(std::move(r));
  }
  return CorpusManifest(std::move(records));
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  return read_manifest(in);
}

}  // namespace specdet::corpus
