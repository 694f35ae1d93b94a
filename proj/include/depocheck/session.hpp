#pragma once

#include <optional>
#include <string>
#include <vector>

#include "depocheck/analysis.hpp"
#include "depocheck/nuggets.hpp"
#include "depocheck/serialize.hpp"

namespace depocheck {

enum class SessionKind { Comparison, Refinement };
enum class SessionState { Pending, Running, Ready, Failed };

std::string_view session_kind_name(SessionKind kind);
std::optional<SessionKind> session_kind_from_name(std::string_view name);
std::string_view session_state_name(SessionState state);
std::optional<SessionState> session_state_from_name(std::string_view name);

struct SummaryInput {
  std::string id;
  std::string text;

  bool operator==(const SummaryInput&) const = default;
};

/// One comparison (two summaries) or refinement (one summary) workflow.
/// State only moves forward: Pending -> Running -> Ready | Failed.
struct Session {
  std::string id;
  SessionKind kind = SessionKind::Comparison;
  std::string transcript_id;
  std::vector<SummaryInput> summaries;
  std::optional<NuggetBank> bank;
  std::vector<AlignmentMap> alignments;  // one per summary
  VerdictMap verdicts;                   // refinement sessions only
  std::optional<ComparisonReport> comparison;
  std::optional<RefinementReport> refinement;
  SessionState state = SessionState::Pending;
  std::string message;  // failure reason

  std::size_t expected_summaries() const { return kind == SessionKind::Comparison ? 2 : 1; }
};

Json to_json(const Session& session);

/// Throws Error(CorruptRecord) when the document does not describe a
/// well-formed session.
Session session_from_json(const Json& doc);

/// The report of a Ready session in its own document form, or null.
Json session_report_json(const Session& session);

}  // namespace depocheck
