#include "depocheck/analysis.hpp"

#include <algorithm>

#include "depocheck/error.hpp"
#include "depocheck/io.hpp"
#include "depocheck/tokens.hpp"
#include "text_util.hpp"

namespace depocheck {

namespace {

bool looks_like_ref(std::string_view piece) {
  if (piece.empty() || piece.find(':') == std::string_view::npos) return false;
  bool digit = false;
  for (char c : piece) {
    if (detail::is_digit(c)) {
      digit = true;
    } else if (c != ':' && c != '-' && c != ' ') {
      return false;
    }
  }
  return digit;
}

struct Group {
  std::size_t begin;  // offset of the opening bracket within the segment
  std::size_t end;    // one past the closing bracket
  std::vector<std::string_view> refs;
};

// Bracketed groups whose every piece looks like a citation ref.
std::vector<Group> citation_groups(std::string_view text) {
  std::vector<Group> groups;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char open = text[i];
    if (open != '(' && open != '[') continue;
    char close = open == '(' ? ')' : ']';
    auto end = text.find(close, i + 1);
    if (end == std::string_view::npos) continue;
    auto inner = text.substr(i + 1, end - i - 1);
    Group g{i, end + 1, {}};
    bool all_refs = true;
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      auto sep = inner.find_first_of(";,", pos);
      auto piece = detail::trim(inner.substr(pos, sep == std::string_view::npos ? std::string_view::npos : sep - pos));
      if (!looks_like_ref(piece)) {
        all_refs = false;
        break;
      }
      g.refs.push_back(piece);
      if (sep == std::string_view::npos) break;
      pos = sep + 1;
    }
    if (all_refs && !g.refs.empty()) {
      groups.push_back(std::move(g));
      i = end;
    }
  }
  return groups;
}

std::vector<std::size_t> bank_positions(const NuggetBank& bank) {
  std::vector<std::size_t> order(bank.nuggets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return bank.nuggets[a].position() < bank.nuggets[b].position();
  });
  return order;
}

// Bank indices ordered by importance rank, then position.
std::vector<std::size_t> reading_order(const NuggetBank& bank) {
  auto order = bank_positions(bank);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return importance_rank(bank.nuggets[a].importance) <
           importance_rank(bank.nuggets[b].importance);
  });
  return order;
}

void require_complete(const NuggetBank& bank, const AlignmentMap& alignments,
                      std::string_view which) {
  for (const auto& n : bank.nuggets) {
    if (!alignments.contains(n.id)) {
      throw Error(ErrorCode::IncompleteAlignment,
                  std::string(which) + " alignments lack nugget " + n.id);
    }
  }
  for (const auto& [id, _] : alignments) {
    if (bank.find(id) == nullptr) {
      throw Error(ErrorCode::IncompleteAlignment,
                  std::string(which) + " alignments name unknown nugget " + id);
    }
  }
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

std::string suggestion_text(SuggestionKind kind, const std::string& ref,
                            const CitationVerdict& verdict) {
  switch (kind) {
    case SuggestionKind::AddCitation:
      return "Citation " + ref + " supports only part of this statement (" + verdict.rationale +
             "). Cite an additional span or soften the claim.";
    case SuggestionKind::FixCitation:
      return "Citation " + ref + " does not support this statement as written (" +
             verdict.rationale + "). Check the cited testimony and correct the citation or the statement.";
    case SuggestionKind::ExpandClaim:
      break;
  }
  return {};
}

}  // namespace

std::size_t SummarySegment::parsed_ref_count() const {
  return static_cast<std::size_t>(
      std::count_if(refs.begin(), refs.end(), [](const InlineRef& r) { return r.span.has_value(); }));
}

std::string summary_id_for(std::string_view text) { return "s" + hex64(fnv1a64(text)); }

SummaryDoc segment_summary(std::string_view text) {
  SummaryDoc doc;
  doc.id = summary_id_for(text);
  doc.text = std::string(text);
  for (const auto& range : segment_sentences(text)) {
    SummarySegment seg;
    seg.range = range;
    seg.text = std::string(text.substr(range.begin, range.size()));
    for (const auto& group : citation_groups(seg.text)) {
      for (auto raw : group.refs) {
        InlineRef ref;
        ref.raw = std::string(raw);
        try {
          ref.span = parse_span_ref(raw);
        } catch (const Error& e) {
          ref.error = e.what();
        }
        seg.refs.push_back(std::move(ref));
      }
    }
    doc.segments.push_back(std::move(seg));
  }
  return doc;
}

std::string segment_claim_text(const SummarySegment& segment) {
  std::string_view text = segment.text;
  std::string out;
  std::size_t pos = 0;
  for (const auto& group : citation_groups(text)) {
    out.append(text.substr(pos, group.begin - pos));
    pos = group.end;
  }
  out.append(text.substr(pos));
  // Collapse the gap a removed group leaves before punctuation or another space.
  std::string cleaned;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == ' ' && i + 1 < out.size() &&
        (out[i + 1] == ' ' || out[i + 1] == '.' || out[i + 1] == ',' || out[i + 1] == ';')) {
      continue;
    }
    cleaned += out[i];
  }
  return std::string(detail::trim(cleaned));
}

double summary_coverage(const NuggetBank& bank, const AlignmentMap& alignments) {
  if (bank.nuggets.empty()) return 0.0;
  std::size_t points = 0;
  for (const auto& n : bank.nuggets) {
    auto it = alignments.find(n.id);
    if (it != alignments.end()) points += static_cast<std::size_t>(std::clamp(it->second.score, 0, 2));
  }
  return static_cast<double>(points) / (2.0 * static_cast<double>(bank.nuggets.size()));
}

ComparisonReport compare_summaries(const NuggetBank& bank, const AlignmentMap& align_a,
                                   const AlignmentMap& align_b) {
  require_complete(bank, align_a, "summary A");
  require_complete(bank, align_b, "summary B");

  ComparisonReport report;
  report.alignments_a = align_a;
  report.alignments_b = align_b;
  for (std::size_t i : bank_positions(bank)) {
    const auto& id = bank.nuggets[i].id;
    const bool in_a = align_a.at(id).score >= 1;
    const bool in_b = align_b.at(id).score >= 1;
    if (in_a && in_b) {
      report.matched.push_back(id);
    } else if (in_a) {
      report.unique_a.push_back(id);
    } else if (in_b) {
      report.unique_b.push_back(id);
    }
  }
  for (std::size_t i : reading_order(bank)) {
    const auto& id = bank.nuggets[i].id;
    if (align_a.at(id).score < 1 && align_b.at(id).score < 1) report.missing.push_back(id);
  }

  auto& s = report.stats;
  s.total = bank.nuggets.size();
  s.matched = report.matched.size();
  s.unique_a = report.unique_a.size();
  s.unique_b = report.unique_b.size();
  s.missing = report.missing.size();
  s.coverage_a = summary_coverage(bank, align_a);
  s.coverage_b = summary_coverage(bank, align_b);
  return report;
}

std::string_view suggestion_kind_name(SuggestionKind kind) {
  switch (kind) {
    case SuggestionKind::AddCitation: return "add-citation";
    case SuggestionKind::FixCitation: return "fix-citation";
    case SuggestionKind::ExpandClaim: return "expand-claim";
  }
  return "fix-citation";
}

namespace {

bool shares_any(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

}  // namespace

RefinementReport build_refinement_report(const SummaryDoc& doc, const NuggetBank& bank,
                                         const AlignmentMap& alignments,
                                         const VerdictMap& verdicts) {
  require_complete(bank, alignments, "summary");
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    const auto expected = doc.segments[i].parsed_ref_count();
    if (expected == 0) continue;
    auto it = verdicts.find(i);
    if (it == verdicts.end() || it->second.size() != expected) {
      throw Error(ErrorCode::MissingVerdicts,
                  "segment " + std::to_string(i) + " needs " + std::to_string(expected) +
                      " citation verdicts");
    }
  }

  RefinementReport report;
  report.summary_id = doc.id;

  for (std::size_t i : reading_order(bank)) {
    const auto& n = bank.nuggets[i];
    const auto& a = alignments.at(n.id);
    if (n.importance == Importance::NonRelevant || a.score >= 2) continue;
    report.omissions.push_back({n.id, a.score, n.importance, a.explanation});
  }

  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    const auto& seg = doc.segments[i];
    std::size_t parsed = 0;
    for (const auto& ref : seg.refs) {
      FlaggedSegment flag;
      flag.segment_index = i;
      flag.range = seg.range;
      flag.ref = ref.raw;
      if (!ref.span) {
        flag.bad_ref = true;
        flag.verdict = {false, false, false, "unparseable citation: " + ref.error};
        flag.kind = SuggestionKind::FixCitation;
      } else {
        flag.verdict = verdicts.at(i)[parsed++];
        if (flag.verdict.all_true()) continue;
        flag.ref = format_span_ref(*ref.span);
        flag.kind = flag.verdict.accurate && flag.verdict.covered ? SuggestionKind::AddCitation
                                                                  : SuggestionKind::FixCitation;
      }
      flag.suggestion = suggestion_text(flag.kind, flag.ref, flag.verdict);
      report.flagged_segments.push_back(std::move(flag));
    }
  }

  // A matched window can span sentences unrelated to the nugget; only the
  // ones sharing a content token with it are reported.
  const auto positions = bank_positions(bank);
  std::vector<std::vector<std::string>> nugget_tokens(bank.nuggets.size());
  for (std::size_t b = 0; b < bank.nuggets.size(); ++b) {
    nugget_tokens[b] = content_token_set(bank.nuggets[b].text);
  }
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    const auto& seg = doc.segments[i];
    const auto seg_tokens = content_token_set(segment_claim_text(seg));
    for (std::size_t b : positions) {
      const auto& n = bank.nuggets[b];
      const auto& a = alignments.at(n.id);
      if (n.importance == Importance::NonRelevant || a.score < 1 || a.absent.empty() ||
          !a.matched_segment || !a.matched_segment->overlaps(seg.range) ||
          !shares_any(nugget_tokens[b], seg_tokens)) {
        continue;
      }
      report.discrepancies.push_back(
          {i, seg.range, n.id,
           "This passage reflects nugget " + n.id + " only in part; not stated: " +
               join(a.absent) + ". Expand the statement or double-check it against the nugget."});
    }
  }
  return report;
}

}  // namespace depocheck
