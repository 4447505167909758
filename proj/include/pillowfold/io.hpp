#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "pillowfold/curve.hpp"
#include "pillowfold/fold.hpp"
#include "pillowfold/optimizer.hpp"
#include "pillowfold/volume.hpp"

namespace pillowfold {

inline constexpr std::string_view kToolName = "pillowfold";
inline constexpr std::string_view kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// A curve document: {"family", "params", "sheet": {"width", "length"}, "metadata"}.
struct CurveSpec {
    CreaseCurve curve = CreaseCurve::sine_arc();
    SheetSpec sheet;
    Json metadata;  // null when absent
};

// Throws ParseError (with 1-based line and dotted field path) for malformed
// JSON, unknown fields and wrong types; DomainError from the curve factories.
CurveSpec parse_curve_spec(std::string_view text);
CurveSpec curve_spec_from_json(const Json& doc);

Json curve_spec_to_json(const CurveSpec& spec);
std::string write_curve_spec(const CurveSpec& spec);

// Result payloads shared by the CLI and the HTTP service.
Json to_json(const ValidationReport& report);
Json to_json(const CrossSectionProfile& profile);
Json to_json(const VolumeResult& volume);
Json to_json(const OptResult& result, const OptimizationProblem& problem);
Json to_json(const FoldedMesh& mesh);  // flat vertex and triangle arrays

// {"operation", "tool": {"name", "version"}, "timestamp", "input", "result"}.
// Pass an empty timestamp to omit the field.
Json result_document(std::string_view operation, const Json& input, const Json& result,
                     const std::string& timestamp);
std::string utc_timestamp();

// Wavefront OBJ with 9 significant digits and 1-based faces.
std::string write_obj(const FoldedMesh& mesh);
// Reader for the subset write_obj emits (v and f records). Throws ParseError.
FoldedMesh read_obj(std::string_view text);

enum class PatternLayout { Envelope, Fig1 };

// Crease pattern in millimetres. Envelope layout: the 2w x L rectangle of both
// faces with crease curves v = f(u) and v = L - f(u) on each face. Fig1 adds
// the end tongues bounded by v = -f(u) and v = L + f(u) to the cut outline.
std::string write_svg_pattern(const CreaseCurve& curve, const SheetSpec& sheet, double scale_mm,
                              PatternLayout layout = PatternLayout::Envelope);

// "x,z" header then one row per profile point.
std::string profile_csv(const CrossSectionProfile& profile);

// Write to a sibling temporary file and rename over the target.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

// Compact number text used in human-readable output (6 decimals).
std::string fixed6(double value);

}  // namespace pillowfold
