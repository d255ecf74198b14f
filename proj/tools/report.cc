#include "report.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "best/dump_io.h"
#include "best/error.h"

namespace best::tools {
namespace {

Json Optional(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json ReportHeader(const std::string& schema) {
  Json doc;
  doc["schema"] = schema;
  doc["version"] = kReportVersion;
  return doc;
}

std::string FormatFraction(const Fraction& f) {
  return std::to_string(f.num()) + "/" + std::to_string(f.den());
}

Json ToJson(const MetricResult& result) {
  Json j;
  j["method"] = ToString(result.method);
  j["metric"] = result.metric.value();
  j["metric_exact"] = FormatFraction(result.metric);
  j["q_star"] = result.q_star;
  j["final_left"] = result.final_left;
  j["final_right"] = result.final_right;
  j["q_min"] = result.q_min;
  j["q_max"] = result.q_max;
  j["steps"] = result.steps;
  Json trace = Json::array();
  for (const auto& p : result.trace) {
    trace.push_back({{"q", p.q},
                     {"train_acc", p.train.value()},
                     {"val_acc", p.val.value()}});
  }
  j["trace"] = std::move(trace);
  return j;
}

Json ToJson(const Correlations& c) {
  return {{"pearson", Optional(c.pearson)},
          {"spearman", Optional(c.spearman)},
          {"kendall", Optional(c.kendall)}};
}

Json ToJson(const RankReport& report) {
  Json j;
  j["source_ids"] = report.source_ids;
  j["metrics"] = report.metrics;
  j["truths"] = report.truths;
  j["ranks_by_metric"] = report.ranks_by_metric;
  j["ranks_by_truth"] = report.ranks_by_truth;
  j["correct"] = report.correct;
  j["fraction_correct"] = report.fraction_correct;
  j["mean_dev"] = report.mean_dev;
  j["std_dev"] = report.std_dev;
  const Json corr = ToJson(report.correlations);
  j["pearson"] = corr["pearson"];
  j["spearman"] = corr["spearman"];
  j["kendall"] = corr["kendall"];
  j["family_correlations"] = ToJson(report.family_correlations);
  j["threshold"] = report.config.threshold;
  j["slack"] = report.config.slack;
  j["slack_mode"] = ToString(report.config.slack_mode);
  return j;
}

Json ToJson(const ProtocolSummary& summary) {
  return {{"fraction_correct", summary.mean_fraction_correct},
          {"pooled_fraction_correct", summary.pooled_fraction_correct},
          {"mean_dev", summary.mean_rank_dev},
          {"std_dev", summary.mean_rank_std},
          {"pearson", Optional(summary.mean_pearson)},
          {"spearman", Optional(summary.mean_spearman)},
          {"kendall", Optional(summary.mean_kendall)}};
}

Json ToJson(const IterationResult& iteration) {
  Json j;
  j["seed"] = iteration.seed;
  j["train_rows"] = iteration.train_rows;
  j["val_rows"] = iteration.val_rows;
  Json scores = Json::array();
  for (std::size_t i = 0; i < iteration.scores.size(); ++i) {
    const auto& s = iteration.scores[i];
    scores.push_back({{"source_id", s.source_id},
                      {"metric", s.metric},
                      {"q_star", s.q_star},
                      {"rank", iteration.ranks[i]}});
  }
  j["scores"] = std::move(scores);
  j["report"] = iteration.report ? ToJson(*iteration.report) : Json(nullptr);
  return j;
}

Json ToJson(const SweepRow& row) {
  return {{"q", row.q},
          {"mean_val_acc", row.mean_val_acc},
          {"stderr", row.stderr_mean},
          {"mean_train_acc", row.mean_train_acc},
          {"bound_q", row.bound_q},
          {"satisfied", row.satisfied},
          {"violation_fraction", row.violation_fraction}};
}

void WriteJson(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

CsvTable::CsvTable(std::string schema, std::vector<std::string> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {}

void CsvTable::AddRow(std::vector<std::string> fields) {
  if (fields.size() != columns_.size()) {
    throw std::logic_error("csv row width differs from header");
  }
  rows_.push_back(std::move(fields));
}

std::string CsvTable::ToString() const {
  std::ostringstream out;
  out << "# schema=" << schema_ << " version=" << kReportVersion << '\n';
  const auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  line(columns_);
  for (const auto& row : rows_) line(row);
  return out.str();
}

void CsvTable::Write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << ToString();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace best::tools
