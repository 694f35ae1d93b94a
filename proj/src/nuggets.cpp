#include "depocheck/nuggets.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "depocheck/error.hpp"
#include "depocheck/tokens.hpp"
#include "text_util.hpp"

namespace depocheck {

namespace {

struct IdParts {
  std::string_view prefix;
  std::string_view digits;
};

std::optional<IdParts> split_id(std::string_view id) {
  std::size_t i = 0;
  while (i < id.size() && !detail::is_digit(id[i])) ++i;
  if (i == id.size()) return std::nullopt;
  for (std::size_t k = i; k < id.size(); ++k) {
    if (!detail::is_digit(id[k])) return std::nullopt;
  }
  return IdParts{id.substr(0, i), id.substr(i)};
}

std::string_view strip_leading_zeros(std::string_view d) {
  while (d.size() > 1 && d.front() == '0') d.remove_prefix(1);
  return d;
}

}  // namespace

std::string_view importance_name(Importance importance) {
  switch (importance) {
    case Importance::Unlabeled: return "unlabeled";
    case Importance::Vital: return "vital";
    case Importance::Okay: return "okay";
    case Importance::NonRelevant: return "non_relevant";
  }
  return "unlabeled";
}

std::optional<Importance> importance_from_name(std::string_view name) {
  static constexpr std::array kAll = {Importance::Unlabeled, Importance::Vital, Importance::Okay,
                                      Importance::NonRelevant};
  for (auto i : kAll) {
    if (importance_name(i) == name) return i;
  }
  return std::nullopt;
}

int importance_rank(Importance importance) {
  switch (importance) {
    case Importance::Vital: return 0;
    case Importance::Okay: return 1;
    case Importance::Unlabeled: return 2;
    case Importance::NonRelevant: return 3;
  }
  return 2;
}

LineAddress Nugget::position() const {
  if (citations.empty()) return {};
  LineAddress best = citations.front().start();
  for (const auto& c : citations) best = std::min(best, c.start());
  return best;
}

const Nugget* NuggetBank::find(std::string_view id) const {
  for (const auto& n : nuggets) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

bool NuggetIdLess::operator()(std::string_view a, std::string_view b) const {
  auto pa = split_id(a);
  auto pb = split_id(b);
  if (pa && pb && pa->prefix == pb->prefix) {
    auto da = strip_leading_zeros(pa->digits);
    auto db = strip_leading_zeros(pb->digits);
    if (da.size() != db.size()) return da.size() < db.size();
    if (da != db) return da < db;
  }
  return a < b;
}

std::string nugget_id_for(std::size_t ordinal) { return "n" + std::to_string(ordinal); }

std::string_view issue_kind_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::DuplicateId: return "DuplicateId";
    case IssueKind::EmptyText: return "EmptyText";
    case IssueKind::MultilineText: return "MultilineText";
    case IssueKind::NoCitations: return "NoCitations";
    case IssueKind::UnresolvableCitation: return "UnresolvableCitation";
  }
  return "Unknown";
}

std::string ValidationIssue::message() const {
  std::string out = std::string(issue_kind_name(kind)) + "(" + nugget_id;
  if (span) out += ", " + format_span_ref(*span);
  return out + ")";
}

std::vector<ValidationIssue> validate_bank(const NuggetBank& bank, const Transcript& transcript) {
  if (bank.transcript_id != transcript.id) {
    throw Error(ErrorCode::TranscriptMismatch, "bank is for transcript '" + bank.transcript_id +
                                                   "', not '" + transcript.id + "'");
  }
  std::vector<ValidationIssue> issues;
  std::set<std::string, std::less<>> seen;
  std::set<std::string, std::less<>> reported;
  for (const auto& n : bank.nuggets) {
    if (!seen.insert(n.id).second && reported.insert(n.id).second) {
      issues.push_back({IssueKind::DuplicateId, n.id, std::nullopt});
    }
    if (detail::trim(n.text).empty()) {
      issues.push_back({IssueKind::EmptyText, n.id, std::nullopt});
    } else if (n.text.find('\n') != std::string::npos) {
      issues.push_back({IssueKind::MultilineText, n.id, std::nullopt});
    }
    if (n.citations.empty()) {
      issues.push_back({IssueKind::NoCitations, n.id, std::nullopt});
    }
    for (const auto& c : n.citations) {
      if (!span_resolves(transcript, c)) {
        issues.push_back({IssueKind::UnresolvableCitation, n.id, c});
      }
    }
  }
  return issues;
}

NuggetBank set_importance(const NuggetBank& bank, std::string_view nugget_id, Importance label) {
  NuggetBank out = bank;
  for (auto& n : out.nuggets) {
    if (n.id == nugget_id) {
      n.importance = label;
      return out;
    }
  }
  throw Error(ErrorCode::UnknownNugget, "no nugget '" + std::string(nugget_id) + "'");
}

NuggetBank dedupe_bank(const NuggetBank& bank) {
  NuggetBank out{bank.transcript_id, {}};
  std::map<std::vector<std::string>, std::size_t> first_by_tokens;
  for (const auto& n : bank.nuggets) {
    std::vector<std::string> key;
    for (auto& t : normalize_tokens(n.text)) key.push_back(std::move(t.text));
    std::sort(key.begin(), key.end());
    auto [it, inserted] = first_by_tokens.emplace(std::move(key), out.nuggets.size());
    if (inserted) {
      out.nuggets.push_back(n);
      continue;
    }
    auto& keeper = out.nuggets[it->second];
    for (const auto& c : n.citations) {
      if (std::find(keeper.citations.begin(), keeper.citations.end(), c) == keeper.citations.end()) {
        keeper.citations.push_back(c);
      }
    }
  }
  return out;
}

void sort_by_position(NuggetBank& bank) {
  std::stable_sort(bank.nuggets.begin(), bank.nuggets.end(),
                   [](const Nugget& a, const Nugget& b) { return a.position() < b.position(); });
}

}  // namespace depocheck
