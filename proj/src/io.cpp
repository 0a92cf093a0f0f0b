#include "metfact/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "metfact/error.hpp"

namespace metfact::io {
namespace {

using Json = nlohmann::ordered_json;

std::string dump_value(const Json& v) { return v.dump(); }

Json scale_set_json(const ScaleSet& s) {
  Json j;
  switch (s.kind()) {
    case ScaleSet::Kind::AllReals:
      j["kind"] = "all";
      break;
    case ScaleSet::Kind::Geometric:
      j["kind"] = "geometric";
      j["ratio"] = s.ratio();
      break;
    case ScaleSet::Kind::Explicit:
      j["kind"] = "explicit";
      j["values"] = s.values();
      break;
  }
  return j;
}

void write_space(std::ostream& os, const FinMetricSpace& space, const std::string& indent) {
  os << indent << "\"labels\": " << dump_value(Json(space.labels())) << ",\n";
  os << indent << "\"matrix\": [";
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    os << (i ? ",\n" : "\n") << indent << "  [";
    for (std::size_t j = 0; j < n; ++j) os << (j ? ", " : "") << dump_value(Json(space(i, j)));
    os << "]";
  }
  os << (n ? "\n" + indent : "") << "]";
}

void write_file(std::ostream& os, const SpaceFile& file, const std::string& indent) {
  os << "{\n";
  const std::string in = indent + "  ";
  os << in << "\"format_version\": " << kFormatVersion << ",\n";
  write_space(os, file.space, in);
  if (!file.subsets.empty()) {
    os << ",\n" << in << "\"subsets\": {";
    bool first = true;
    for (const auto& [name, labels] : file.subsets) {
      os << (first ? "\n" : ",\n") << in << "  " << dump_value(Json(name)) << ": "
         << dump_value(Json(labels));
      first = false;
    }
    os << "\n" << in << "}";
  }
  if (file.scale_set) os << ",\n" << in << "\"scale_set\": " << dump_value(scale_set_json(*file.scale_set));
  if (!file.maps.empty()) {
    os << ",\n" << in << "\"maps\": {";
    bool first = true;
    for (const auto& [name, table] : file.maps) {
      Json obj = Json::object();
      for (const auto& [k, v] : table) obj[k] = v;
      os << (first ? "\n" : ",\n") << in << "  " << dump_value(Json(name)) << ": " << dump_value(obj);
      first = false;
    }
    os << "\n" << in << "}";
  }
  if (!file.metrics.empty()) {
    os << ",\n" << in << "\"metrics\": {";
    bool first = true;
    for (const auto& [name, space] : file.metrics) {
      os << (first ? "\n" : ",\n") << in << "  " << dump_value(Json(name)) << ": ";
      SpaceFile nested;
      nested.space = space;
      write_file(os, nested, in + "  ");
      first = false;
    }
    os << "\n" << in << "}";
  }
  os << "\n" << indent << "}";
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

FinMetricSpace read_space(const Json& root, const std::string& where) {
  if (!root.is_object()) fail(where, "expected a JSON object");
  if (!root.contains("labels") || !root["labels"].is_array()) fail(where, "missing \"labels\" array");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < root["labels"].size(); ++i) {
    const auto& l = root["labels"][i];
    if (!l.is_string()) fail(where, "label " + std::to_string(i) + " is not a string");
    labels.push_back(l.get<std::string>());
  }
  if (!root.contains("matrix") || !root["matrix"].is_array()) fail(where, "missing \"matrix\" array");
  const auto& matrix = root["matrix"];
  const std::size_t n = labels.size();
  if (matrix.size() != n) {
    fail(where, "matrix has " + std::to_string(matrix.size()) + " rows for " + std::to_string(n) +
                    " labels");
  }
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = matrix[i];
    if (!row.is_array()) fail(where, "matrix row " + std::to_string(i) + " is not an array");
    if (row.size() != n) {
      fail(where, "matrix row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                      " columns, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cell = row[j];
      if (!cell.is_number() || !std::isfinite(cell.get<double>()) || cell.get<double>() < 0.0) {
        fail(where, "matrix row " + std::to_string(i) + ", column " + std::to_string(j) +
                        ": expected a finite non-negative number, got " + cell.dump());
      }
      flat.push_back(cell.get<double>());
    }
  }
  try {
    return FinMetricSpace(std::move(labels), std::move(flat));
  } catch (const StructuralError& e) {
    fail(where, e.what());
  }
}

ScaleSet read_scale_set(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    fail("scale_set", "expected an object with a string \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "all") return ScaleSet::all_reals();
    if (kind == "geometric") {
      if (!j.contains("ratio") || !j["ratio"].is_number()) fail("scale_set", "geometric needs \"ratio\"");
      return ScaleSet::geometric(j["ratio"].get<double>());
    }
    if (kind == "explicit") {
      if (!j.contains("values") || !j["values"].is_array()) fail("scale_set", "explicit needs \"values\"");
      std::vector<double> values;
      for (const auto& v : j["values"]) {
        if (!v.is_number()) fail("scale_set", "explicit values must be numbers");
        values.push_back(v.get<double>());
      }
      return ScaleSet::explicit_values(std::move(values));
    }
  } catch (const DomainError& e) {
    fail("scale_set", e.what());
  }
  fail("scale_set", "unknown kind '" + kind + "'");
}

SpaceFile read_file(const Json& root) {
  if (!root.is_object()) fail("file", "expected a JSON object");
  if (!root.contains("format_version") || !root["format_version"].is_number_integer()) {
    fail("file", "missing integer \"format_version\"");
  }
  if (root["format_version"].get<int>() != kFormatVersion) {
    fail("file", "unsupported format_version " + root["format_version"].dump());
  }
  SpaceFile out;
  out.space = read_space(root, "file");
  if (root.contains("subsets")) {
    const auto& subsets = root["subsets"];
    if (!subsets.is_object()) fail("subsets", "expected an object");
    for (const auto& [name, list] : subsets.items()) {
      if (!list.is_array()) fail("subsets." + name, "expected an array of labels");
      std::vector<std::string> labels;
      for (const auto& l : list) {
        if (!l.is_string()) fail("subsets." + name, "labels must be strings");
        if (!out.space.contains(l.get<std::string>())) {
          fail("subsets." + name, "unknown label '" + l.get<std::string>() + "'");
        }
        labels.push_back(l.get<std::string>());
      }
      out.subsets[name] = std::move(labels);
    }
  }
  if (root.contains("scale_set")) out.scale_set = read_scale_set(root["scale_set"]);
  if (root.contains("maps")) {
    if (!root["maps"].is_object()) fail("maps", "expected an object");
    for (const auto& [name, table] : root["maps"].items()) {
      if (!table.is_object()) fail("maps." + name, "expected an object");
      for (const auto& [k, v] : table.items()) {
        if (!v.is_string()) fail("maps." + name, "values must be strings");
        out.maps[name][k] = v.get<std::string>();
      }
    }
  }
  if (root.contains("metrics")) {
    if (!root["metrics"].is_object()) fail("metrics", "expected an object");
    for (const auto& [name, nested] : root["metrics"].items()) {
      out.metrics.emplace(name, read_space(nested, "metrics." + name));
    }
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

std::string to_json(const SpaceFile& file) {
  std::ostringstream os;
  write_file(os, file, "");
  os << "\n";
  return os.str();
}

SpaceFile from_json(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return read_file(root);
}

SpaceFile from_csv(const std::string& text, CsvLabels mode) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_csv(line));
  }
  std::vector<std::string> labels;
  std::size_t first = 0;
  if (!rows.empty() && mode != CsvLabels::Auto) {
    double probe;
    const bool header = mode == CsvLabels::Header ||
                        std::any_of(rows[0].begin(), rows[0].end(),
                                    [&](const std::string& c) { return !parse_double(c, probe); });
    if (header) {
      labels = rows[0];
      first = 1;
    }
  }
  const std::size_t n = rows.size() - first;
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  } else if (labels.size() != n) {
    fail("csv", "header has " + std::to_string(labels.size()) + " labels for " + std::to_string(n) +
                    " rows");
  }
  std::vector<double> flat;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[first + i];
    if (row.size() != n) {
      fail("csv", "row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                      " columns, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      double v;
      if (!parse_double(row[j], v) || !std::isfinite(v) || v < 0.0) {
        fail("csv", "row " + std::to_string(i) + ", column " + std::to_string(j) +
                        ": expected a finite non-negative number, got '" + row[j] + "'");
      }
      flat.push_back(v);
    }
  }
  SpaceFile out;
  try {
    out.space = FinMetricSpace(std::move(labels), std::move(flat));
  } catch (const StructuralError& e) {
    fail("csv", e.what());
  }
  return out;
}

std::string read_all(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SpaceFile load(const std::string& path, CsvLabels labels) {
  std::string text;
  if (path == "-") {
    text = read_all(std::cin);
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    text = read_all(in);
  }
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  const auto start = text.find_first_not_of(" \t\r\n");
  if (csv || (start != std::string::npos && text[start] != '{')) return from_csv(text, labels);
  return from_json(text);
}

void save(const SpaceFile& file, const std::string& path) {
  const std::string text = to_json(file);
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

}  // namespace metfact::io
