#pragma once

#include <string>

#include "depocheck/analysis.hpp"
#include "depocheck/judge.hpp"
#include "depocheck/nuggets.hpp"
#include "json.hpp"

// Structured-document forms of the domain types. Objects use sorted keys and
// span refs their canonical string form, so equal values serialize to equal
// bytes. Every *_from_json throws Error(MalformedInput) on schema violations.
namespace depocheck {

using Json = nlohmann::json;

/// Two-space indented JSON followed by a newline.
std::string dump_document(const Json& doc);
Json parse_document(std::string_view text);

Json to_json(const NuggetBank& bank);
NuggetBank bank_from_json(const Json& doc);

Json to_json(const AlignmentResult& result);
AlignmentResult alignment_from_json(const Json& doc);
Json to_json(const AlignmentMap& map);
AlignmentMap alignment_map_from_json(const Json& doc);

Json to_json(const CitationVerdict& verdict);
CitationVerdict verdict_from_json(const Json& doc);
Json to_json(const VerdictMap& verdicts);
VerdictMap verdict_map_from_json(const Json& doc);

Json to_json(const ComparisonReport& report);
ComparisonReport comparison_from_json(const Json& doc);

Json to_json(const RefinementReport& report);
RefinementReport refinement_from_json(const Json& doc);

Json to_json(const ValidationIssue& issue);

/// Pages and lines, for clients that render the deposition.
Json to_json(const Transcript& transcript);

/// The file written by the `align` stage.
Json alignment_file(const std::string& transcript_id, const std::string& summary_id,
                    const AlignmentMap& alignments);
AlignmentMap alignments_from_file(const Json& doc);

}  // namespace depocheck
