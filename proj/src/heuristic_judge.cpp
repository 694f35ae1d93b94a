#include "depocheck/heuristic_judge.hpp"

#include <algorithm>
#include <memory>

#include "depocheck/kernels.hpp"
#include "depocheck/tokens.hpp"
#include "text_util.hpp"

namespace depocheck {

namespace {

std::size_t count_common(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

std::vector<std::string> set_union(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Content tokens of `text` in first-occurrence order, without repeats.
std::vector<std::string> ordered_unique_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : normalize_tokens(text)) {
    if (std::find(out.begin(), out.end(), t.text) == out.end()) out.push_back(std::move(t.text));
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

std::string ratio(std::size_t hits, std::size_t total) {
  return std::to_string(hits) + "/" + std::to_string(total);
}

}  // namespace

PreparedSummary prepare_summary(std::string_view summary) {
  PreparedSummary out;
  out.size = summary.size();
  out.sentences = segment_sentences(summary);
  out.sentence_tokens.reserve(out.sentences.size());
  for (const auto& r : out.sentences) {
    out.sentence_tokens.push_back(content_token_set(summary.substr(r.begin, r.size())));
  }
  return out;
}

AlignmentResult heuristic_align(const Nugget& nugget, const PreparedSummary& summary,
                                const Thresholds& thresholds) {
  AlignmentResult result;
  result.nugget_id = nugget.id;
  const auto ordered = ordered_unique_tokens(nugget.text);
  auto wanted = ordered;
  std::sort(wanted.begin(), wanted.end());
  if (wanted.empty()) {
    result.explanation = "nugget has no content tokens";
    return result;
  }

  std::size_t best_hits = 0;
  std::size_t best_start = 0;
  std::size_t best_len = 0;
  std::vector<std::string> best_window;
  const std::size_t sentences = summary.sentences.size();
  for (std::size_t start = 0; start < sentences; ++start) {
    std::vector<std::string> window;
    for (std::size_t len = 1; len <= kMaxWindowSentences && start + len <= sentences; ++len) {
      window = set_union(window, summary.sentence_tokens[start + len - 1]);
      std::size_t hits = count_common(wanted, window);
      if (hits > best_hits) {
        best_hits = hits;
        best_start = start;
        best_len = len;
        best_window = window;
      }
    }
  }

  const double coverage = static_cast<double>(best_hits) / static_cast<double>(wanted.size());
  if (coverage >= thresholds.full) {
    result.score = 2;
  } else if (coverage >= thresholds.partial) {
    result.score = 1;
  }

  for (const auto& t : ordered) {
    if (!std::binary_search(best_window.begin(), best_window.end(), t)) result.absent.push_back(t);
  }

  result.explanation = "coverage " + ratio(best_hits, wanted.size());
  if (best_len > 0) {
    result.explanation += best_len == 1 ? " in sentence " + std::to_string(best_start + 1)
                                        : " in sentences " + std::to_string(best_start + 1) +
                                              "-" + std::to_string(best_start + best_len);
  }
  result.explanation +=
      result.absent.empty() ? "; all content tokens present" : "; absent: " + join(result.absent);

  if (result.score >= 1) {
    result.matched_segment = TextRange{summary.sentences[best_start].begin,
                                       summary.sentences[best_start + best_len - 1].end};
  }
  return result;
}

CitationVerdict heuristic_verify(std::string_view claim, std::string_view cited_span,
                                 const Thresholds& thresholds) {
  CitationVerdict verdict;
  const auto claim_tokens = ordered_unique_tokens(claim);
  const auto span_tokens = content_token_set(cited_span);
  const auto span_numbers = numeric_token_set(cited_span);

  std::vector<std::string> missing_terms;
  std::vector<std::string> missing_numbers;
  for (const auto& t : claim_tokens) {
    if (!std::binary_search(span_tokens.begin(), span_tokens.end(), t)) {
      missing_terms.push_back(t);
    }
    if (Token{t, false}.numeric() &&
        !std::binary_search(span_numbers.begin(), span_numbers.end(), t)) {
      missing_numbers.push_back(t);
    }
  }

  const std::size_t hits = claim_tokens.size() - missing_terms.size();
  const double coverage = claim_tokens.empty() ? 1.0
                                               : static_cast<double>(hits) /
                                                     static_cast<double>(claim_tokens.size());
  verdict.accurate = missing_numbers.empty();
  verdict.covered = coverage >= thresholds.coverage;
  verdict.sufficient = coverage >= thresholds.sufficiency;

  verdict.rationale = "coverage " + ratio(hits, claim_tokens.size());
  if (!missing_numbers.empty()) {
    verdict.rationale += "; numbers not in cited span: " + join(missing_numbers);
  }
  verdict.rationale += missing_terms.empty() ? "; every claim term appears in cited span"
                                             : "; claim terms not in cited span: " +
                                                   join(missing_terms);
  return verdict;
}

HeuristicJudge::HeuristicJudge(JudgeConfig config) : config_(std::move(config)) {
  config_.validate();
}

ExtractionResult HeuristicJudge::extract_nuggets(const Transcript& transcript) const {
  ExtractionResult out;
  out.bank.transcript_id = transcript.id;
  auto lines = kernels::qualifying_answer_lines(transcript, kMinNuggetTokens);
  out.bank.nuggets.reserve(lines.size());
  for (const auto& address : lines) {
    const Line* line = transcript.find_line(address);
    Nugget n;
    n.id = nugget_id_for(out.bank.nuggets.size() + 1);
    n.text = std::string(detail::trim(strip_turn_marker(line->text)));
    n.citations.push_back({address.page, address.line, address.page, address.line});
    out.bank.nuggets.push_back(std::move(n));
  }
  return out;
}

AlignmentResult HeuristicJudge::align_nugget(const Nugget& nugget,
                                             std::string_view summary) const {
  return heuristic_align(nugget, prepare_summary(summary), config_.thresholds);
}

CitationVerdict HeuristicJudge::verify_citation(std::string_view claim,
                                                std::string_view cited_span) const {
  return heuristic_verify(claim, cited_span, config_.thresholds);
}

std::function<AlignmentResult(const Nugget&)> HeuristicJudge::aligner_for(
    std::string_view summary) const {
  auto prepared = std::make_shared<const PreparedSummary>(prepare_summary(summary));
  return [prepared, thresholds = config_.thresholds](const Nugget& n) {
    return heuristic_align(n, *prepared, thresholds);
  };
}

}  // namespace depocheck
