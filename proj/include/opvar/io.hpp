#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "opvar/linalg.hpp"
#include "opvar/report.hpp"
#include "opvar/suite.hpp"

namespace opvar {

using Json = nlohmann::ordered_json;

// Matrix files: {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}, "im" optional.
ComplexMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix parse_matrix_file(const std::string& path);
void write_matrix_file(const ComplexMatrix& m, const std::string& path);
/// A matrix file holding a single column (or single row) read as a vector.
Vector parse_vector_file(const std::string& path);

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  Json parameters = Json::object();
  std::string tool_version;
  std::string timestamp;  // ISO 8601 UTC; the only field allowed to differ between identical runs
};

std::string tool_version();
std::string utc_timestamp();

Json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

Json report_to_json(const CheckReport& r);
CheckReport report_from_json(const Json& j);
Json suite_to_json(const SuiteReport& s);
SuiteReport suite_from_json(const Json& j);

enum class ReportFormat { Json, Csv };
ReportFormat parse_format(const std::string& text);

/// What a CLI run writes: manifest, overall verdict, the checks, and for
/// `suite` the full suite report. `artifacts` holds command-specific extras
/// (matrices, values) and is omitted when null.
struct ReportDocument {
  RunManifest manifest;
  std::vector<CheckReport> checks;
  std::optional<SuiteReport> suite;
  Json artifacts;

  bool all_passed() const;
};

Json document_to_json(const ReportDocument& doc);
ReportDocument document_from_json(const Json& j);

/// CSV: header "name,residual_or_margin,tolerance,passed", one row per check.
std::string to_csv(const std::vector<CheckReport>& checks);
/// Fixed key order, two-space indentation, shortest round-trip doubles.
std::string to_json_text(const ReportDocument& doc);

/// Throws IoError when the file cannot be written.
void write_report(const ReportDocument& doc, const std::string& path, ReportFormat format);
ReportDocument read_report(const std::string& path);

}  // namespace opvar
