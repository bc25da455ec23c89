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

#include "specdet/report.hpp"

#include <cmath>
#include <sstream>

#include "specdet/text_util.hpp"

namespace specdet::eval {
namespace {

std::string metric(double v) { return format_fixed(v, 3); }
std::string timing(const std::optional<double>& v) { return v ? format_fixed(*v, 6) : "N/A"; }

void metric_cells(std::ostringstream& out, const MetricsReport& m) {
  out << " " << metric(m.f1) << " | " << metric(m.fbeta) << " | " << metric(m.precision) << " | "
      << metric(m.recall) << " | " << metric(m.specificity) << " | " << metric(m.gmean) << " | "
      << metric(m.avg) << " |";
}

std::string optional_csv(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

void csv_line(std::ostringstream& out, ml::ClassifierKind kind, const char* phase,
              const MetricsReport& m) {
  out << ml::to_string(kind) << ',' << phase << ',' << format_double(m.f1) << ','
      << format_double(m.fbeta) << ',' << format_double(m.precision) << ','
      << format_double(m.recall) << ',' << format_double(m.specificity) << ','
      << format_double(m.gmean) << ',' << format_double(m.avg) << ',' << format_double(m.beta)
      << ',' << optional_csv(m.trt_s) << ',' << optional_csv(m.prt_s) << '\n';
}

}  // namespace

std::string markdown_report(const std::vector<EvaluationRow>& rows, const std::string& title,
                            int k) {
  std::ostringstream out;
  out << "## " << title << "\n\n";
  out << "| Classifier | " << k << "-fold F1 | F-b | Pre. | Rec. | Spec. | G-M | Avg. | TRT(s) "
      << "| Test F1 | F-b | Pre. | Rec. | Spec. | G-M | Avg. | PRT(s) |\n";
  out << "|---";
  for (int i = 0; i < 16; ++i) out << "|---:";
  out << "|\n";
  for (const auto& row : rows) {
    out << "| " << ml::display_name(row.kind) << " |";
    if (row.cv) {
      metric_cells(out, *row.cv);
      out << " " << timing(row.cv->trt_s) << " |";
    } else {
      for (int i = 0; i < 8; ++i) out << " N/A |";
    }
    metric_cells(out, row.test);
    out << " " << timing(row.test.prt_s) << " |\n";
  }
  if (!rows.empty()) {
    out << "\nF-b uses beta = " << format_double(rows.front().test.beta)
        << ". PRT is the time to score 1000 observations.\n";
  }
  return out.str();
}

std::string csv_report(const std::vector<EvaluationRow>& rows) {
  std::ostringstream out;
  out << "classifier,phase,f1,fbeta,precision,recall,specificity,gmean,avg,beta,trt_s,prt_s\n";
  for (const auto& row : rows) {
    if (row.cv) csv_line(out, row.kind, "cv", *row.cv);
    csv_line(out, row.kind, "validation", row.validation);
    csv_line(out, row.kind, "test", row.test);
  }
  return out.str();
}

std::string roc_csv(const std::vector<EvaluationRow>& rows) {
  std::ostringstream out;
  for (const auto& row : rows) {
    if (rows.size() > 1) out << "# classifier," << ml::to_string(row.kind) << '\n';
    out << "threshold,fpr,tpr\n";
    for (const auto& p : row.roc.points) {
      out << (std::isinf(p.threshold) ? std::string("inf") : format_double(p.threshold)) << ','
          << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
    }
    out << "auc," << format_double(row.roc.auc) << '\n';
  }
  return out.str();
}

}  // namespace specdet::eval
