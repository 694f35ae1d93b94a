#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depocheck/judge.hpp"
#include "depocheck/nuggets.hpp"
#include "depocheck/sentences.hpp"

namespace depocheck {

/// A citation written inline in a summary, e.g. "(12:05-12:18)".
struct InlineRef {
  std::string raw;
  std::optional<CitationSpan> span;  // absent when `raw` does not parse
  std::string error;                 // BadSpanRef message when absent

  bool operator==(const InlineRef&) const = default;
};

struct SummarySegment {
  TextRange range;
  std::string text;
  std::vector<InlineRef> refs;

  std::size_t parsed_ref_count() const;
  bool operator==(const SummarySegment&) const = default;
};

struct SummaryDoc {
  std::string id;
  std::string text;
  std::vector<SummarySegment> segments;
};

std::string summary_id_for(std::string_view text);

/// Splits a summary into sentences and pulls out citation refs written
/// inside parentheses or brackets. A bracket group counts as citations
/// when each of its ';' or ','-separated pieces holds a ':' and nothing
/// but digits, ':', '-' and spaces; pieces that fail to parse are kept
/// as annotations. "(2021)" is not a citation.
SummaryDoc segment_summary(std::string_view text);

/// The segment text with citation groups removed, as judged for support.
std::string segment_claim_text(const SummarySegment& segment);

struct ComparisonStats {
  std::size_t total = 0;
  std::size_t matched = 0;
  std::size_t unique_a = 0;
  std::size_t unique_b = 0;
  std::size_t missing = 0;
  // (2 * fully + 1 * partially) / (2 * total); 0 for an empty bank.
  double coverage_a = 0.0;
  double coverage_b = 0.0;
};

/// Partition of the bank by presence (score >= 1) in two summaries.
/// matched and unique lists are in bank position order; missing is ordered
/// by importance (Vital first), then position.
struct ComparisonReport {
  std::vector<std::string> matched;
  std::vector<std::string> unique_a;
  std::vector<std::string> unique_b;
  std::vector<std::string> missing;
  AlignmentMap alignments_a;
  AlignmentMap alignments_b;
  ComparisonStats stats;
};

inline constexpr std::string_view kCoverageFormula = "(2*fully + partially) / (2*total)";

double summary_coverage(const NuggetBank& bank, const AlignmentMap& alignments);

/// Throws Error(IncompleteAlignment) unless both maps hold exactly the
/// bank's ids.
ComparisonReport compare_summaries(const NuggetBank& bank, const AlignmentMap& align_a,
                                   const AlignmentMap& align_b);

/// Verdicts per segment index, one per parsed ref of the segment, in ref order.
using VerdictMap = std::map<std::size_t, std::vector<CitationVerdict>>;

enum class SuggestionKind { AddCitation, FixCitation, ExpandClaim };

std::string_view suggestion_kind_name(SuggestionKind kind);

struct Omission {
  std::string nugget_id;
  int score = 0;
  Importance importance = Importance::Unlabeled;
  std::string explanation;
};

struct FlaggedSegment {
  std::size_t segment_index = 0;
  TextRange range;
  std::string ref;
  bool bad_ref = false;
  CitationVerdict verdict;
  SuggestionKind kind = SuggestionKind::FixCitation;
  std::string suggestion;
};

struct Discrepancy {
  std::size_t segment_index = 0;
  TextRange range;
  std::string nugget_id;
  std::string note;
};

struct RefinementReport {
  std::string summary_id;
  std::vector<Omission> omissions;
  std::vector<FlaggedSegment> flagged_segments;
  std::vector<Discrepancy> discrepancies;

  bool empty() const {
    return omissions.empty() && flagged_segments.empty() && discrepancies.empty();
  }
};

/// omissions: nuggets scored 0 or 1 except NonRelevant ones, by importance
/// then position. flagged_segments: every unparseable ref and every ref
/// whose verdict has a false field. discrepancies: segments overlapping a
/// present nugget's matched range while that nugget reports absent parts.
/// Throws Error(IncompleteAlignment) or Error(MissingVerdicts).
RefinementReport build_refinement_report(const SummaryDoc& doc, const NuggetBank& bank,
                                         const AlignmentMap& alignments,
                                         const VerdictMap& verdicts);

}  // namespace depocheck
