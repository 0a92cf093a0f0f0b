#pragma once

// SpaceFile: the self-describing JSON text format for spaces.
//
//   {
//     "format_version": 1,
//     "labels": ["a", "b"],
//     "matrix": [[0, 1], [1, 0]],
//     "subsets": {"F": ["a"]},                       optional
//     "scale_set": {"kind": "geometric", "ratio": 0.5}, optional
//     "maps": {"projection": {"a": "__theta__"}},    optional
//     "metrics": {"d": {<nested SpaceFile>}}         optional
//   }
//
// Numbers are written in shortest round-trip form, so load(save(x)) == x.

#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metfact/scale_set.hpp"
#include "metfact/space.hpp"

namespace metfact::io {

inline constexpr int kFormatVersion = 1;

// Malformed input. The message names the offending row/column when the
// problem is inside the matrix.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpaceFile {
  FinMetricSpace space;
  std::map<std::string, std::vector<std::string>> subsets;
  std::optional<ScaleSet> scale_set;
  std::map<std::string, std::map<std::string, std::string>> maps;
  std::map<std::string, FinMetricSpace> metrics;
};

std::string to_json(const SpaceFile& file);
SpaceFile from_json(const std::string& text);

// Plain CSV matrix, one row per line. Detect: the first row is a header
// iff some cell is non-numeric. Auto: labels p0, p1, ... and no header.
enum class CsvLabels { Detect, Auto, Header };
SpaceFile from_csv(const std::string& text, CsvLabels labels = CsvLabels::Detect);

// Reads a file (or standard input for "-"), choosing CSV for *.csv or any
// text not starting with '{'.
SpaceFile load(const std::string& path, CsvLabels labels = CsvLabels::Detect);
void save(const SpaceFile& file, const std::string& path);

std::string read_all(std::istream& in);

}  // namespace metfact::io
