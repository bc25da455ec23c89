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

#include <cstdlib>
#include <sstream>

#include "specdet/cli.hpp"
#include "specdet/collector.hpp"
#include "specdet/cps.hpp"
#include "specdet/text_util.hpp"
#include "test_util.hpp"

namespace specdet::cli {
namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result specdet(std::vector<std::string> args) {
  args.insert(args.begin(), "specdet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> verdict_lines(const std::string& text) {
  std::vector<std::string> v;
  for (auto& l : split_lines(text)) {
    if (!l.empty()) v.push_back(l);
  }
  return v;
}

// subject,score,label with score in [0,1] and label = score >= threshold.
void expect_verdicts(const std::vector<std::string>& lines, double threshold = 0.5) {
  for (const auto& l : lines) {
    const auto f = split_csv_record(l);
    ASSERT_EQ(f.size(), 3u) << l;
    double s = -1;
    ASSERT_TRUE(parse_double(f[1], s)) << l;
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_EQ(f[2], s >= threshold ? "1" : "0") << l;
  }
}

TEST(Cli, Version) {
  const auto r = specdet({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("specdet 1.0.0"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  auto r = specdet({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_EQ(specdet({}).code, 1);
  EXPECT_EQ(specdet({"synth"}).code, 1);
  EXPECT_EQ(specdet({"evaluate", "--features", "x", "--kfold", "1"}).code, 1);
  EXPECT_EQ(specdet({"detect", "--model", "m", "--trace", "t", "--threshold", "2"}).code, 1);
}

TEST(Cli, MissingInputIsDataError) {
  testing::TempDir dir;
  EXPECT_EQ(specdet({"train", "--classifier", "rf", "--features", dir / "none.csv", "--out",
                     dir / "m.json"})
                .code,
            2);
  EXPECT_EQ(specdet({"detect", "--model", dir / "none.json", "--trace", dir / "t.csv"}).code, 2);
}

TEST(Cli, CollectWithoutCountersIsCapabilityError) {
  if (cps::probe_capability().available) GTEST_SKIP() << "hardware counters are available";
  testing::TempDir dir;
  const auto r = specdet({"collect", "--duration-s", "1", "--out", dir / "t.csv"});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, SeedFromEnvironment) {
  testing::TempDir dir;
  ::setenv("SPECDET_SEED", "17", 1);
  const auto a = specdet({"synth", "--benign", "20", "--attack", "5", "--out", dir / "a.csv"});
  ::unsetenv("SPECDET_SEED");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(specdet({"--seed", "17", "synth", "--benign", "20", "--attack", "5", "--out",
                     dir / "b.csv"})
                .code,
            0);
  ASSERT_EQ(specdet({"synth", "--benign", "20", "--attack", "5", "--out", dir / "c.csv"}).code, 0);
  EXPECT_EQ(read_file(dir / "a.csv"), read_file(dir / "b.csv"));
  EXPECT_NE(read_file(dir / "a.csv"), read_file(dir / "c.csv"));
}

// Trace pipeline: an RF trained on one synthetic trace, scored on another.
class TraceCli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir;
    ASSERT_EQ(specdet({"--seed", "1", "synth", "--out", *dir_ / "train.csv"}).code, 0);
    const auto r = specdet({"--seed", "1", "train", "--classifier", "rf", "--features",
                            *dir_ / "train.csv", "--out", *dir_ / "rf.json"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() { delete dir_; }
  static testing::TempDir* dir_;
};
testing::TempDir* TraceCli::dir_ = nullptr;

TEST_F(TraceCli, AttackOnlyTraceIsFlagged) {
  ASSERT_EQ(specdet({"--seed", "2", "synth", "--benign", "0", "--attack", "400", "--out",
                     *dir_ / "attack.csv"})
                .code,
            0);
  const auto r = specdet({"detect", "--model", *dir_ / "rf.json", "--trace", *dir_ / "attack.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = verdict_lines(r.out);
  ASSERT_EQ(lines.size(), 400u);
  expect_verdicts(lines);
  std::size_t flagged = 0;
  for (const auto& l : lines) flagged += l.back() == '1';
  EXPECT_GE(flagged, 380u);
}

TEST_F(TraceCli, EmptyTraceGivesNoVerdicts) {
  write_file(*dir_ / "empty.csv", std::string(cps::kTraceHeader) + "\n");
  const auto r = specdet({"detect", "--model", *dir_ / "rf.json", "--trace", *dir_ / "empty.csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(verdict_lines(r.out).empty());
}

TEST_F(TraceCli, AggregateIsMajorityPerPid) {
  const std::vector<cps::CpsSample> s = {
      {0, 9, "x", 1000, 900, 5000, std::nullopt},
      {1, 9, "x", 1000, 900, 5000, std::nullopt},
      {2, 9, "x", 1000, 10, 500000, std::nullopt},
  };
  cps::save_trace(*dir_ / "three.csv", s);
  const auto per = specdet({"detect", "--model", *dir_ / "rf.json", "--trace", *dir_ / "three.csv"});
  ASSERT_EQ(per.code, 0) << per.err;
  const auto lines = verdict_lines(per.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0].rfind("9:x@0,", 0), 0u);
  EXPECT_EQ(lines[0].back(), '1');
  EXPECT_EQ(lines[1].back(), '1');
  EXPECT_EQ(lines[2].back(), '0');

  const auto agg = specdet({"detect", "--model", *dir_ / "rf.json", "--trace", *dir_ / "three.csv",
                            "--aggregate", "pid", "--out", *dir_ / "agg.txt"});
  ASSERT_EQ(agg.code, 0) << agg.err;
  const auto a = verdict_lines(read_file(*dir_ / "agg.txt"));
  ASSERT_EQ(a.size(), 1u);
  expect_verdicts(a);
  EXPECT_EQ(a[0].rfind("9:x,", 0), 0u);
  EXPECT_EQ(a[0].back(), '1');
}

TEST_F(TraceCli, ThresholdControlsLabels) {
  const auto r = specdet({"detect", "--model", *dir_ / "rf.json", "--trace", *dir_ / "train.csv",
                          "--threshold", "0.9"});
  ASSERT_EQ(r.code, 0);
  expect_verdicts(verdict_lines(r.out), 0.9);
}

TEST_F(TraceCli, EvaluateWritesReports) {
  const auto r = specdet({"--seed", "3", "evaluate", "--features", *dir_ / "train.csv",
                          "--classifier", "nb", "--kfold", "3", "--report-csv",
                          *dir_ / "r.csv", "--roc", *dir_ / "roc.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| NB |"), std::string::npos);
  const auto csv = split_lines(read_file(*dir_ / "r.csv"));
  EXPECT_EQ(csv[1].rfind("nb,cv,", 0), 0u);
  EXPECT_NE(read_file(*dir_ / "roc.csv").find("auc,"), std::string::npos);
  EXPECT_EQ(specdet({"evaluate", "--features", *dir_ / "train.csv", "--classifier", "cnn"}).code, 2);
}

// Gadget pipeline over the bundled assembly fixture.
class GadgetCli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir;
    const auto gadgets = testing::data_dir() / "gadgets";
    const auto& d = *dir_;
    ASSERT_EQ(specdet({"ingest-gadgets", "--dir", (gadgets / "spectre").string(), "--label", "1",
                       "--dir", (gadgets / "benign").string(), "--label", "0", "--out",
                       d / "corpus.jsonl"})
                  .code,
              0);
    ASSERT_EQ(specdet({"--seed", "5", "train-embedding", "--corpus", d / "corpus.jsonl", "--out",
                       d / "emb.txt"})
                  .code,
              0);
    ASSERT_EQ(specdet({"encode", "--corpus", d / "corpus.jsonl", "--embedding", d / "emb.txt",
                       "--out", d / "pooled.csv"})
                  .code,
              0);
    ASSERT_EQ(specdet({"--seed", "5", "train", "--classifier", "rf", "--features",
                       d / "pooled.csv", "--out", d / "rf.json"})
                  .code,
              0);
  }
  static void TearDownTestSuite() { delete dir_; }
  static testing::TempDir* dir_;
};
testing::TempDir* GadgetCli::dir_ = nullptr;

TEST_F(GadgetCli, VictimFunctionIsFlagged) {
  const auto src = (testing::data_dir() / "gadgets" / "spectre" / "s01_O0.s").string();
  const auto r = specdet({"scan", "--model", *dir_ / "rf.json", "--embedding", *dir_ / "emb.txt",
                          "--input", src});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = verdict_lines(r.out);
  ASSERT_EQ(lines.size(), 1u);
  expect_verdicts(lines);
  EXPECT_EQ(lines[0].rfind("victim_function,", 0), 0u) << lines[0];
  EXPECT_EQ(lines[0].back(), '1');
}

TEST_F(GadgetCli, ManifestInputScoresEveryRecord) {
  const auto r = specdet({"scan", "--model", *dir_ / "rf.json", "--embedding", *dir_ / "emb.txt",
                          "--input", *dir_ / "corpus.jsonl", "--threshold", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = verdict_lines(r.out);
  EXPECT_EQ(lines.size(), 52u);
  expect_verdicts(lines, 0.3);
}

TEST_F(GadgetCli, EmptyInputGivesNoVerdicts) {
  write_file(*dir_ / "empty.s", "");
  const auto r = specdet({"scan", "--model", *dir_ / "rf.json", "--embedding", *dir_ / "emb.txt",
                          "--input", *dir_ / "empty.s"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(verdict_lines(r.out).empty());
}

TEST_F(GadgetCli, SchemaMismatchIsRejected) {
  const auto& d = *dir_;
  ASSERT_EQ(specdet({"synth", "--benign", "30", "--attack", "10", "--out", d / "t.csv"}).code, 0);
  ASSERT_EQ(specdet({"train", "--classifier", "nb", "--features", d / "t.csv", "--out",
                     d / "nb.json"})
                .code,
            0);
  const auto src = (testing::data_dir() / "gadgets" / "spectre" / "s01_O0.s").string();
  const auto r = specdet({"scan", "--model", d / "nb.json", "--embedding", d / "emb.txt",
                          "--input", src});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(specdet({"detect", "--model", d / "rf.json", "--trace", d / "t.csv"}).code, 2);
}

}  // namespace
}  // namespace specdet::cli
