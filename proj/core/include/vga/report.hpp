#pragma once

// JSON and CSV serialization shared by the command line and the service.
// Every number in a JSON report is rounded to 15 significant digits, so a
// report parsed back and dumped again is byte-identical.

#include <string>

#include <json.hpp>

#include "vga/dataset.hpp"
#include "vga/four_phase.hpp"
#include "vga/models.hpp"
#include "vga/post_analysis.hpp"
#include "vga/sbm.hpp"

namespace vga {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kReportDigits = 15;
inline constexpr int kCsvDecimals = 4;

using Json = nlohmann::json;

double round_significant(double v, int digits = kReportDigits);
/// Rounds every floating point number in `j`; non-finite values become null.
Json rounded(Json j);

Json to_json(const Decomposition& dc);
Json to_json(const Geometry& g);
Json to_json(const Interlinkage& il);
Json to_json(const DualityReport& r);

/// Full report of one assessment: Step I and Step II values, targets, peers,
/// decomposition, interlinkage, geometry in the assessment's own frame and
/// the duality certificate.
Json assessment_report(const Dataset& d, const VgaAssessment& a);
Json geometry_report(const Dataset& d, const VgaAssessment& a, Frame frame);
Json session_report(const Phase4Session& s);
Json sbm_report(const SbmComparison& c);
Json error_report(const std::string& kind, const std::string& message);

/// Rounds, stamps schema_version and pretty-prints with a trailing newline.
std::string dump_report(Json j);

/// field,value rows with numbers at 4 decimals.
std::string assessment_csv(const Dataset& d, const VgaAssessment& a);

}  // namespace vga
