#ifndef BEST_DUMP_IO_H_
#define BEST_DUMP_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "best/dataset.h"
#include "best/protocol.h"
#include "best/ranking.h"

namespace best {

// Dump CSV layout:
//
//   # m=<int> n=<int> source_id=<str> split=<train|val|test> version=1
//   p1,...,pm,label
//   ...
//
// Header keys may appear in any order; version defaults to 1 and any other
// version is rejected. Values are written with 9 significant digits.
inline constexpr int kDumpVersion = 1;
inline constexpr int kTruthVersion = 1;

enum class Split { kTrain, kVal, kTest };

std::string ToString(Split split);
Split ParseSplit(const std::string& name);

struct DumpHeader {
  int m = 2;
  int n = 2;
  std::string source_id;
  Split split = Split::kTrain;
};

struct DumpFile {
  DumpHeader header;
  LabeledDataset data;
};

// Throws ParseError carrying the offending line number.
DumpFile ParseDump(std::istream& in);
DumpFile ReadDump(const std::filesystem::path& path);

void WriteDump(std::ostream& out, const DumpHeader& header,
               const LabeledDataset& data);
void WriteDump(const std::filesystem::path& path, const DumpHeader& header,
               const LabeledDataset& data);

// Ground-truth CSV: an optional "# schema=truth version=1" line, then a
// "source_id,accuracy" header and one row per source.
GroundTruth ParseTruth(std::istream& in);
GroundTruth ReadTruth(const std::filesystem::path& path);
void WriteTruth(std::ostream& out, const GroundTruth& truth);
void WriteTruth(const std::filesystem::path& path, const GroundTruth& truth);

// Reads every dump (*.csv whose first line is a dump header) in `dir` and
// pairs the train and val splits of each source. Test splits are ignored.
// Sources are returned sorted by id.
std::vector<SourceData> LoadSourceDirectory(const std::filesystem::path& dir);

// Formats a value the way dumps and CSV reports do ("%.9g").
std::string FormatValue(double v);

}  // namespace best

#endif  // BEST_DUMP_IO_H_
