#pragma once

// JSON documents and reports.
//
// A graph document lists one row-major matrix per colour; entry [r][c]
// counts the edges of that colour with range vertices[r] and source
// vertices[c]. Reports embed their input, so the certificates they carry can
// be re-verified from the report alone.

#include "kgraph/classify.hpp"
#include "kgraph/fixtures.hpp"
#include "kgraph/oracle.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace kgraph {

using Json = nlohmann::ordered_json;

inline constexpr const char* kGraphFormat = "kgraph-matrix/1";
inline constexpr const char* kRayFormat = "kgraph-ray/1";
inline constexpr const char* kReportFormat = "kgraph-report/1";

/// Throws MalformedInput on syntax errors, wrong tags and bad shapes.
Document parse_document(const std::string& text);
Document document_from_json(const Json& j);
Json document_to_json(const Document& doc);
std::string emit_document(const Document& doc);

Json trace_to_json(const KGraphPresentation& g, const GraphTrace& t);
GraphTrace trace_from_json(const KGraphPresentation& g, const Json& j);
Json witness_to_json(const KGraphPresentation& g, const LatticeWitness& w);
LatticeWitness witness_from_json(const KGraphPresentation& g, const Json& j);

struct ReportOptions {
  bool assume_aperiodic = false;
};

/// Structure, verdicts and certificates. Deterministic for equal inputs.
Json classify_report(const Document& doc, const ReportOptions& options);

/// Exactly one of a graph trace or a lattice witness, Gordan audit enforced.
Json trace_report(const KGraphPresentation& g);

/// Class table summary, probes, conicality and the cross-check.
Json semigroup_report(const KGraphPresentation& g, const Box& box);

/// Indented "key: value" rendering of any report.
std::string render_text(const Json& report);

/// Re-verifies every certificate in a classify report against its embedded
/// input and re-derives the verdicts. Throws MalformedInput on any mismatch.
Document verify_report(const std::string& text);

}  // namespace kgraph
