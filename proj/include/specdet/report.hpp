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

#ifndef SPECDET_REPORT_HPP_
#define SPECDET_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "specdet/eval.hpp"

namespace specdet::eval {

struct EvaluationRow {
  ml::ClassifierKind kind = ml::ClassifierKind::kRf;
  std::optional<MetricsReport> cv;  // absent when cross-validation is skipped
  MetricsReport validation;
  MetricsReport test;               // prt_s set
  RocCurve roc;                     // on the test partition
};

// Markdown table with two blocks per classifier row:
// cross-validation metrics + TRT, then test metrics + PRT.
std::string markdown_report(const std::vector<EvaluationRow>& rows, const std::string& title,
                            int k);
// Machine-readable twin: one line per (classifier, phase).
std::string csv_report(const std::vector<EvaluationRow>& rows);
// threshold,fpr,tpr rows then "auc,<value>"; with several classifiers each
// block is preceded by "# classifier,<name>".
std::string roc_csv(const std::vector<EvaluationRow>& rows);

}  // namespace specdet::eval

#endif  // SPECDET_REPORT_HPP_
