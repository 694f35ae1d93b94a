#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depocheck/transcript.hpp"

namespace depocheck {

// Human relevance label. Okay is the middle label ("partially relevant");
// it is named so to stay clear of the alignment scale's "partial".
enum class Importance { Unlabeled, Vital, Okay, NonRelevant };

std::string_view importance_name(Importance importance);
std::optional<Importance> importance_from_name(std::string_view name);

/// Ordering used when listing nuggets for a reader: Vital, Okay,
/// Unlabeled, NonRelevant.
int importance_rank(Importance importance);

struct Nugget {
  std::string id;
  std::string text;
  std::vector<CitationSpan> citations;
  Importance importance = Importance::Unlabeled;

  /// Earliest citation start; {0,0} if there are no citations.
  LineAddress position() const;

  bool operator==(const Nugget&) const = default;
};

struct NuggetBank {
  std::string transcript_id;
  std::vector<Nugget> nuggets;

  const Nugget* find(std::string_view id) const;

  bool operator==(const NuggetBank&) const = default;
};

/// Natural order on ids: "n2" < "n10". Falls back to plain string order
/// when ids do not share the letter-prefix + number shape.
struct NuggetIdLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const;
};

std::string nugget_id_for(std::size_t ordinal);

enum class IssueKind { DuplicateId, EmptyText, MultilineText, NoCitations, UnresolvableCitation };

std::string_view issue_kind_name(IssueKind kind);

struct ValidationIssue {
  IssueKind kind;
  std::string nugget_id;
  std::optional<CitationSpan> span;

  std::string message() const;
  bool operator==(const ValidationIssue&) const = default;
};

/// One issue per violation, in bank order; empty iff the bank is valid for
/// the transcript. Throws Error(TranscriptMismatch) if the ids differ.
std::vector<ValidationIssue> validate_bank(const NuggetBank& bank, const Transcript& transcript);

/// Returns a copy with one label changed. Throws Error(UnknownNugget).
NuggetBank set_importance(const NuggetBank& bank, std::string_view nugget_id, Importance label);

/// Drops nuggets whose normalized token multiset equals an earlier
/// nugget's; the earlier nugget absorbs the later one's citations.
NuggetBank dedupe_bank(const NuggetBank& bank);

/// Stable sort by position().
void sort_by_position(NuggetBank& bank);

}  // namespace depocheck
