#ifndef BEST_TOOLS_REPORT_H_
#define BEST_TOOLS_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "best/protocol.h"
#include "best/search.h"
#include "best/theorem_sim.h"
#include "json.hpp"

namespace best::tools {

using Json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

// Every JSON report starts with {"schema": name, "version": 1, ...}.
Json ReportHeader(const std::string& schema);

Json ToJson(const MetricResult& result);
Json ToJson(const RankReport& report);
Json ToJson(const Correlations& c);
Json ToJson(const ProtocolSummary& summary);
Json ToJson(const IterationResult& iteration);
Json ToJson(const SweepRow& row);

// Writes `doc` with two-space indentation and a trailing newline.
void WriteJson(const std::filesystem::path& path, const Json& doc);

// CSV with a "# schema=<name> version=1" first line, a header row and the
// given rows. Fields are written verbatim.
class CsvTable {
 public:
  CsvTable(std::string schema, std::vector<std::string> columns);

  void AddRow(std::vector<std::string> fields);
  void Write(const std::filesystem::path& path) const;
  std::string ToString() const;

 private:
  std::string schema_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string FormatFraction(const Fraction& f);

}  // namespace best::tools

#endif  // BEST_TOOLS_REPORT_H_
