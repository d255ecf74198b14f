#include "best/dump_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "best/error.h"

namespace best {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(Trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> ToDouble(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<long long> ToInt(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

// key=value tokens of a "# ..." line.
std::map<std::string, std::string> HeaderTokens(const std::string& line,
                                                std::size_t lineno) {
  std::string_view body = Trim(line);
  if (body.empty() || body.front() != '#') {
    throw ParseError("expected '# key=value ...' header", lineno);
  }
  body.remove_prefix(1);
  std::map<std::string, std::string> tokens;
  std::istringstream in{std::string(body)};
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError("malformed header token '" + tok + "'", lineno);
    }
    tokens[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return tokens;
}

void CheckVersion(const std::map<std::string, std::string>& tokens,
                  int supported, std::size_t lineno) {
  const auto it = tokens.find("version");
  if (it == tokens.end()) return;
  const auto v = ToInt(it->second);
  if (!v || *v != supported) {
    throw ParseError("unsupported schema version '" + it->second +
                         "' (supported: " + std::to_string(supported) + ")",
                     lineno);
  }
}

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

bool IsValidId(const std::string& id) {
  return !id.empty() &&
         std::none_of(id.begin(), id.end(), [](char c) {
           return c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                  c == ',' || c == '=' || c == '#';
         });
}

}  // namespace

std::string ToString(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split ParseSplit(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw InvalidInput("unknown split '" + name + "'");
}

std::string FormatValue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

DumpFile ParseDump(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty dump file", 0);
  ++lineno;
  const auto tokens = HeaderTokens(line, lineno);
  CheckVersion(tokens, kDumpVersion, lineno);
  const auto require = [&](const std::string& key) {
    const auto it = tokens.find(key);
    if (it == tokens.end()) {
      throw ParseError("header is missing '" + key + "'", lineno);
    }
    return it->second;
  };
  DumpHeader header;
  const auto m = ToInt(require("m"));
  const auto n = ToInt(require("n"));
  if (!m || *m < 2 || *m > 1'000'000) {
    throw ParseError("header m must be an integer >= 2", lineno);
  }
  if (!n || *n < 2 || *n > 1'000'000) {
    throw ParseError("header n must be an integer >= 2", lineno);
  }
  header.m = static_cast<int>(*m);
  header.n = static_cast<int>(*n);
  header.source_id = require("source_id");
  if (!IsValidId(header.source_id)) {
    throw ParseError("invalid source_id '" + header.source_id + "'", lineno);
  }
  try {
    header.split = ParseSplit(require("split"));
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), lineno);
  }

  DumpFile dump{header, LabeledDataset(header.m, header.n)};
  std::vector<double> probs(static_cast<std::size_t>(header.m));
  const auto width = static_cast<std::size_t>(header.m) + 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = Trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = SplitFields(body, ',');
    if (fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) +
                           " fields (m probabilities + label), got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    for (std::size_t j = 0; j < probs.size(); ++j) {
      const auto v = ToDouble(fields[j]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("value '" + std::string(fields[j]) +
                             "' is not a finite decimal",
                         lineno);
      }
      probs[j] = *v;
    }
    const auto label = ToInt(fields.back());
    if (!label || *label < 1 || *label > header.n) {
      throw ParseError("label '" + std::string(fields.back()) +
                           "' outside [1, " + std::to_string(header.n) + "]",
                       lineno);
    }
    try {
      dump.data.Add(probs, static_cast<int>(*label));
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return dump;
}

DumpFile ReadDump(const std::filesystem::path& path) {
  std::ifstream in = OpenIn(path);
  try {
    return ParseDump(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void WriteDump(std::ostream& out, const DumpHeader& header,
               const LabeledDataset& data) {
  if (!IsValidId(header.source_id)) {
    throw InvalidInput("invalid source_id '" + header.source_id + "'");
  }
  if (header.m != data.source_classes() || header.n != data.target_classes()) {
    throw InvalidInput("dump header disagrees with dataset shape");
  }
  out << "# m=" << header.m << " n=" << header.n
      << " source_id=" << header.source_id
      << " split=" << ToString(header.split) << " version=" << kDumpVersion
      << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (const double p : data.probs(i)) out << FormatValue(p) << ',';
    out << data.label(i) << '\n';
  }
}

void WriteDump(const std::filesystem::path& path, const DumpHeader& header,
               const LabeledDataset& data) {
  std::ofstream out = OpenOut(path);
  WriteDump(out, header, data);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

GroundTruth ParseTruth(std::istream& in) {
  GroundTruth truth;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = Trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      CheckVersion(HeaderTokens(line, lineno), kTruthVersion, lineno);
      continue;
    }
    const auto fields = SplitFields(body, ',');
    if (!saw_header) {
      if (fields.size() != 2 || fields[0] != "source_id" ||
          fields[1] != "accuracy") {
        throw ParseError("expected header 'source_id,accuracy'", lineno);
      }
      saw_header = true;
      continue;
    }
    if (fields.size() != 2) {
      throw ParseError("expected 2 fields (source_id,accuracy)", lineno);
    }
    const auto acc = ToDouble(fields[1]);
    if (!acc || !(*acc >= 0.0 && *acc <= 1.0)) {
      throw ParseError("accuracy '" + std::string(fields[1]) +
                           "' is not a number in [0, 1]",
                       lineno);
    }
    const std::string id(fields[0]);
    if (!IsValidId(id)) throw ParseError("invalid source_id", lineno);
    if (!truth.emplace(id, *acc).second) {
      throw ParseError("duplicate source_id '" + id + "'", lineno);
    }
  }
  if (!saw_header) throw ParseError("truth file has no header", 0);
  return truth;
}

GroundTruth ReadTruth(const std::filesystem::path& path) {
  std::ifstream in = OpenIn(path);
  try {
    return ParseTruth(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void WriteTruth(std::ostream& out, const GroundTruth& truth) {
  out << "# schema=truth version=" << kTruthVersion << '\n';
  out << "source_id,accuracy\n";
  for (const auto& [id, acc] : truth) {
    out << id << ',' << FormatValue(acc) << '\n';
  }
}

void WriteTruth(const std::filesystem::path& path, const GroundTruth& truth) {
  std::ofstream out = OpenOut(path);
  WriteTruth(out, truth);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<SourceData> LoadSourceDirectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("'" + dir.string() + "' is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, std::optional<LabeledDataset>> train;
  std::map<std::string, std::optional<LabeledDataset>> val;
  for (const auto& file : files) {
    {
      std::ifstream probe = OpenIn(file);
      std::string first;
      std::getline(probe, first);
      if (first.rfind('#', 0) != 0 ||
          first.find("source_id=") == std::string::npos) {
        continue;
      }
    }
    DumpFile dump = ReadDump(file);
    if (dump.header.split == Split::kTest) continue;
    auto& slot = dump.header.split == Split::kTrain
                     ? train[dump.header.source_id]
                     : val[dump.header.source_id];
    if (slot) {
      throw InvalidInput("duplicate " + ToString(dump.header.split) +
                         " dump for source '" + dump.header.source_id + "'");
    }
    slot = std::move(dump.data);
  }
  std::vector<SourceData> sources;
  for (auto& [id, t] : train) {
    auto it = val.find(id);
    if (it == val.end()) {
      throw InvalidInput("source '" + id + "' has no val dump");
    }
    sources.push_back(SourceData{id, std::move(*t), std::move(*it->second)});
    val.erase(it);
  }
  if (!val.empty()) {
    throw InvalidInput("source '" + val.begin()->first + "' has no train dump");
  }
  if (sources.empty()) {
    throw InvalidInput("no dump files found in '" + dir.string() + "'");
  }
  return sources;
}

}  // namespace best
