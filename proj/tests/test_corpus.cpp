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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "specdet/corpus.hpp"
#include "specdet/error.hpp"
#include "specdet/text_util.hpp"
#include "test_util.hpp"

namespace specdet::corpus {
namespace {

using testing::TempDir;

TEST(Preprocess, DropsFileDirective) {
  EXPECT_EQ(preprocess(".file \"gadget.c\"\n movl %eax, %ebx"), "movl %eax, %ebx");
}

TEST(Preprocess, EmptyStaysEmpty) { EXPECT_EQ(preprocess(""), ""); }

TEST(Preprocess, StripsComments) {
  EXPECT_EQ(preprocess("movl %eax, %ebx # load"), "movl %eax, %ebx");
  EXPECT_EQ(preprocess("movl %eax, %ebx ; load"), "movl %eax, %ebx");
}

TEST(Preprocess, DropsEveryListedDirective) {
  const std::string text =
      "\t.file\t\"a.c\"\n\t.ident\t\"GCC\"\n\t.section .rodata\n\t.text\n\t.globl f\n"
      "\t.type f, @function\n\t.size f, .-f\n\t.align 4\n\t.cfi_startproc\n"
      "\t.cfi_def_cfa_offset 16\n\t.loc 1 2 3\nf:\n\tret\n";
  EXPECT_EQ(preprocess(text), "f:\nret");
}

TEST(Preprocess, DirectiveMatchIsWholeWord) {
  // .long and .zero are data directives outside the removal list.
  EXPECT_EQ(preprocess(".long 16\n.textual x"), ".long 16\n.textual x");
}

TEST(Preprocess, DropsPathWords) {
  EXPECT_EQ(preprocess("call /usr/lib/foo.so\nmov C:\\tmp\\x, %eax"), "call\nmov %eax");
}

TEST(Preprocess, NormalizesWhitespace) {
  EXPECT_EQ(preprocess("  movl\t%eax,   %ebx  \n\n\n  ret "), "movl %eax, %ebx\nret");
}

TEST(Preprocess, IdempotentOnRandomText) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> pieces = {
      ".file", "\"x.c\"", "movl", "%eax,", "#", ";", "/usr/x", "\\w", ".text", ".cfi_x",
      "ret", "\n", "\t", " ", "label:", ".L2:", "cmp", "x,", "array1_size", ".LOC", "\r\n"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      text += pieces[pick(rng)];
      if (rng() % 2) text += ' ';
    }
    const std::string once = preprocess(text);
    EXPECT_EQ(preprocess(once), once) << text;
  }
}

TEST(Tokenize, SplitsOnSeparators) {
  EXPECT_EQ(tokenize("movl %eax, %ebx"), (std::vector<std::string>{"movl", "%eax", "%ebx"}));
  EXPECT_TRUE(tokenize("").empty());
}

TEST(Tokenize, CompiledBoundsCheck) {
  EXPECT_EQ(tokenize("cmp x, array1_size"),
            (std::vector<std::string>{"cmp", "x", "array1_size"}));
}

TEST(Tokenize, MemoryOperandsAndCase) {
  EXPECT_EQ(tokenize("MOVZBL (%RAX,%RDX), %EDX\n.L3:"),
            (std::vector<std::string>{"movzbl", "%rax", "%rdx", "%edx", ".l3"}));
  EXPECT_EQ(tokenize("movq -8(%rbp), %rax"),
            (std::vector<std::string>{"movq", "-8", "%rbp", "%rax"}));
}

TEST(GadgetRecord, TokensMatchCleanText) {
  const auto r = GadgetRecord::from_text("g", 1, "src", ".text\nmov %eax, %ebx\n");
  EXPECT_EQ(r.clean_text, "mov %eax, %ebx");
  EXPECT_EQ(tokenize(r.clean_text), r.tokens);
}

TEST(CorpusManifest, RejectsDuplicateIds) {
  auto a = GadgetRecord::from_text("x", 0, "", "ret");
  EXPECT_THROW(CorpusManifest({a, a}), DataError);
}

TEST(CorpusManifest, RejectsBadLabel) {
  auto a = GadgetRecord::from_text("x", 2, "", "ret");
  EXPECT_THROW(CorpusManifest({a}), DataError);
}

TEST(CorpusManifest, CountsClasses) {
  CorpusManifest m({GadgetRecord::from_text("a", 1, "", "ret"),
                    GadgetRecord::from_text("b", 0, "", "ret"),
                    GadgetRecord::from_text("c", 0, "", "ret")});
  EXPECT_EQ(m.class_counts()[0], 2u);
  EXPECT_EQ(m.class_counts()[1], 1u);
  EXPECT_EQ(m.class_counts()[0] + m.class_counts()[1], m.size());
}

TEST(Ingest, EmptyDirectory) {
  TempDir dir;
  EXPECT_TRUE(ingest_gadget_dir(dir.path(), 0).empty());
}

TEST(Ingest, MissingDirectoryIsIoError) {
  TempDir dir;
  EXPECT_THROW(ingest_gadget_dir(dir.path() / "nope", 0), IoError);
}

TEST(Ingest, LexicographicOrder) {
  TempDir dir;
  write_file(dir.path() / "b.s", "ret\n");
  write_file(dir.path() / "a.s", "nop\n");
  const auto records = ingest_gadget_dir(dir.path(), 0);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(std::filesystem::path(records[0].id).filename(), "a.s");
  EXPECT_EQ(std::filesystem::path(records[1].id).filename(), "b.s");
}

TEST(Ingest, LabelFromArgument) {
  TempDir dir;
  write_file(dir.path() / "victim.s", "cmp x, array1_size\n");
  CorpusManifest m(ingest_gadget_dir(dir.path(), 1));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.records()[0].label, 1);
  EXPECT_EQ(m.class_counts()[1], 1u);
  EXPECT_EQ(m.class_counts()[0], 0u);
}

TEST(Ingest, SkipsBinaryFiles) {
  TempDir dir;
  write_file(dir.path() / "bin.o", std::string("\x7f" "ELF\0\0", 6));
  write_file(dir.path() / "bad.s", "mov \xff\xfe\n");
  write_file(dir.path() / "ok.s", "ret\n");
  IngestLog log;
  const auto records = ingest_gadget_dir(dir.path(), 0, &log);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(log.warnings.size(), 2u);
}

TEST(Ingest, RecursesIntoSubdirectories) {
  TempDir dir;
  std::filesystem::create_directories(dir.path() / "sub");
  write_file(dir.path() / "sub" / "x.s", "ret\n");
  const auto records = ingest_gadget_dir(dir.path(), 0);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_NE(records[0].id.find("sub/x.s"), std::string::npos);
}

TEST(Ingest, RecordsHoldInvariants) {
  const auto records = ingest_gadget_dir(testing::data_dir() / "gadgets" / "spectre", 1);
  ASSERT_FALSE(records.empty());
  for (const auto& r : records) {
    EXPECT_EQ(tokenize(r.clean_text), r.tokens);
    for (const auto& t : r.tokens) {
      EXPECT_EQ(t.find('/'), std::string::npos) << t;
      EXPECT_EQ(t.find('\\'), std::string::npos) << t;
      EXPECT_FALSE(is_removed_directive(t)) << t;
    }
  }
}

TEST(Manifest, RoundTripAndDeterminism) {
  const auto dir = testing::data_dir() / "gadgets" / "benign";
  CorpusManifest m(ingest_gadget_dir(dir, 0));
  std::ostringstream a, b;
  write_manifest(a, m);
  write_manifest(b, CorpusManifest(ingest_gadget_dir(dir, 0)));
  EXPECT_EQ(a.str(), b.str());

  std::istringstream in(a.str());
  const auto back = read_manifest(in);
  EXPECT_EQ(back.records(), m.records());
}

TEST(Manifest, FieldOrderIsFixed) {
  CorpusManifest m({GadgetRecord::from_text("a", 1, "s", "ret")});
  std::ostringstream out;
  write_manifest(out, m);
  EXPECT_EQ(out.str(),
            "{\"id\":\"a\",\"label\":1,\"source\":\"s\",\"raw_text\":\"ret\","
            "\"clean_text\":\"ret\",\"tokens\":[\"ret\"]}\n");
}

TEST(Manifest, RejectsTamperedTokens) {
  std::istringstream in(
      "{\"id\":\"a\",\"label\":1,\"source\":\"s\",\"raw_text\":\"ret\","
      "\"clean_text\":\"ret\",\"tokens\":[\"nop\"]}\n");
  EXPECT_THROW(read_manifest(in), DataError);
}

TEST(Manifest, ReportsBadLine) {
  std::istringstream in("not json\n");
  try {
    read_manifest(in);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

}  // namespace
}  // namespace specdet::corpus
