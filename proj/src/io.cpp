#include "opvar/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "opvar/error.hpp"

#ifndef OPVAR_VERSION
#define OPVAR_VERSION "0.0.0"
#endif

namespace opvar {

namespace {

Json real_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorKind::SchemaError, "field '" + field + "' must be a number");
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::SchemaError, std::string("missing field '") + key + "'");
  return j.at(key);
}

Eigen::Index positive_extent(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw Error(ErrorKind::SchemaError, std::string("field '") + key + "' must be a positive integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

Eigen::MatrixXd read_grid(const Json& grid, const char* key, Eigen::Index rows, Eigen::Index cols) {
  if (!grid.is_array() || static_cast<Eigen::Index>(grid.size()) != rows) {
    std::ostringstream os;
    os << "field '" << key << "' must have " << rows << " rows";
    throw Error(ErrorKind::SchemaError, os.str());
  }
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = grid[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      std::ostringstream os;
      os << "field '" << key << "' row " << i << " must have " << cols << " entries";
      throw Error(ErrorKind::SchemaError, os.str());
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        std::ostringstream os;
        os << "field '" << key << "' entry (" << i << ", " << c << ") is not a number";
        throw Error(ErrorKind::SchemaError, os.str());
      }
      out(i, c) = v.get<double>();
      if (!std::isfinite(out(i, c))) {
        std::ostringstream os;
        os << "field '" << key << "' entry (" << i << ", " << c << ") is not finite";
        throw Error(ErrorKind::NonFiniteValue, os.str());
      }
    }
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, origin + " is not valid JSON: " + e.what());
  }
}

std::string kind_name(CheckKind k) { return k == CheckKind::Residual ? "residual" : "margin"; }

CheckKind kind_from_name(const std::string& s) {
  if (s == "residual") return CheckKind::Residual;
  if (s == "margin") return CheckKind::Margin;
  throw Error(ErrorKind::SchemaError, "unknown check kind '" + s + "'");
}

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ComplexMatrix matrix_from_json(const Json& j) {
  const Eigen::Index rows = positive_extent(j, "rows");
  const Eigen::Index cols = positive_extent(j, "cols");
  const Eigen::MatrixXd re = read_grid(require(j, "re"), "re", rows, cols);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(rows, cols);
  if (j.contains("im")) im = read_grid(j.at("im"), "im", rows, cols);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = Complex(re(r, c), im(r, c));
  return m;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

ComplexMatrix parse_matrix_file(const std::string& path) {
  try {
    return matrix_from_json(parse_json_text(read_text(path), "'" + path + "'"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IoError) throw;
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void write_matrix_file(const ComplexMatrix& m, const std::string& path) {
  write_text(path, matrix_to_json(m).dump(2) + "\n");
}

Vector parse_vector_file(const std::string& path) {
  const ComplexMatrix m = parse_matrix_file(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw Error(ErrorKind::SchemaError, path + ": a vector file needs rows == 1 or cols == 1");
}

std::string tool_version() { return OPVAR_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json manifest_to_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["inputs"] = m.inputs;
  j["parameters"] = m.parameters;
  j["tool_version"] = m.tool_version;
  j["timestamp"] = m.timestamp;
  return j;
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.command = require(j, "command").get<std::string>();
  m.inputs = require(j, "inputs").get<std::vector<std::string>>();
  m.parameters = require(j, "parameters");
  m.tool_version = require(j, "tool_version").get<std::string>();
  m.timestamp = require(j, "timestamp").get<std::string>();
  return m;
}

Json report_to_json(const CheckReport& r) {
  Json j;
  j["name"] = r.name;
  j["kind"] = kind_name(r.kind);
  j["residual_or_margin"] = real_to_json(r.value);
  j["tolerance"] = real_to_json(r.tolerance);
  j["passed"] = r.passed;
  Json details = Json::object();
  for (const auto& [k, v] : r.details) details[k] = real_to_json(v);
  j["details"] = std::move(details);
  return j;
}

CheckReport report_from_json(const Json& j) {
  CheckReport r;
  r.name = require(j, "name").get<std::string>();
  r.kind = kind_from_name(require(j, "kind").get<std::string>());
  r.value = real_from_json(require(j, "residual_or_margin"), "residual_or_margin");
  r.tolerance = real_from_json(require(j, "tolerance"), "tolerance");
  r.passed = require(j, "passed").get<bool>();
  for (const auto& [k, v] : require(j, "details").items()) r.details.emplace_back(k, real_from_json(v, k));
  return r;
}

Json suite_to_json(const SuiteReport& s) {
  Json j;
  j["seed"] = s.seed;
  j["ensemble"] = s.ensemble;
  j["passed"] = s.passed;
  j["failed"] = s.failed;
  Json summaries = Json::array();
  for (const auto& c : s.summaries) {
    Json e;
    e["name"] = c.name;
    e["kind"] = kind_name(c.kind);
    e["count"] = c.count;
    e["failures"] = c.failures;
    e["worst"] = real_to_json(c.worst);
    summaries.push_back(std::move(e));
  }
  j["summaries"] = std::move(summaries);
  Json checks = Json::array();
  for (const auto& tc : s.checks) {
    Json e;
    e["trial"] = tc.trial;
    e["check"] = report_to_json(tc.report);
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

SuiteReport suite_from_json(const Json& j) {
  SuiteReport s;
  s.seed = require(j, "seed").get<std::uint64_t>();
  s.ensemble = require(j, "ensemble").get<std::string>();
  s.passed = require(j, "passed").get<int>();
  s.failed = require(j, "failed").get<int>();
  for (const auto& e : require(j, "summaries")) {
    CheckSummary c;
    c.name = require(e, "name").get<std::string>();
    c.kind = kind_from_name(require(e, "kind").get<std::string>());
    c.count = require(e, "count").get<int>();
    c.failures = require(e, "failures").get<int>();
    c.worst = real_from_json(require(e, "worst"), "worst");
    s.summaries.push_back(std::move(c));
  }
  for (const auto& e : require(j, "checks"))
    s.checks.push_back({require(e, "trial").get<int>(), report_from_json(require(e, "check"))});
  return s;
}

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw Error(ErrorKind::InvalidArgument, "unknown format '" + text + "' (json|csv)");
}

bool ReportDocument::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !suite || suite->all_passed();
}

Json document_to_json(const ReportDocument& doc) {
  Json j;
  j["manifest"] = manifest_to_json(doc.manifest);
  j["passed"] = doc.all_passed();
  Json checks = Json::array();
  for (const auto& c : doc.checks) checks.push_back(report_to_json(c));
  j["checks"] = std::move(checks);
  if (doc.suite) j["suite"] = suite_to_json(*doc.suite);
  if (!doc.artifacts.is_null()) j["artifacts"] = doc.artifacts;
  return j;
}

ReportDocument document_from_json(const Json& j) {
  ReportDocument doc;
  doc.manifest = manifest_from_json(require(j, "manifest"));
  for (const auto& c : require(j, "checks")) doc.checks.push_back(report_from_json(c));
  if (j.contains("suite")) doc.suite = suite_from_json(j.at("suite"));
  if (j.contains("artifacts")) doc.artifacts = j.at("artifacts");
  return doc;
}

std::string to_csv(const std::vector<CheckReport>& checks) {
  std::string out = "name,residual_or_margin,tolerance,passed\n";
  for (const auto& c : checks) {
    out += csv_field(c.name) + "," + shortest(c.value) + "," + shortest(c.tolerance) + "," +
           (c.passed ? "true" : "false") + "\n";
  }
  return out;
}

std::string to_json_text(const ReportDocument& doc) { return document_to_json(doc).dump(2) + "\n"; }

void write_report(const ReportDocument& doc, const std::string& path, ReportFormat format) {
  if (format == ReportFormat::Json) {
    write_text(path, to_json_text(doc));
    return;
  }
  std::vector<CheckReport> rows = doc.checks;
  if (doc.suite)
    for (const auto& tc : doc.suite->checks) rows.push_back(tc.report);
  write_text(path, to_csv(rows));
}

ReportDocument read_report(const std::string& path) {
  return document_from_json(parse_json_text(read_text(path), "'" + path + "'"));
}

}  // namespace opvar
