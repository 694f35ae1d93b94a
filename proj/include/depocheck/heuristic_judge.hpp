#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "depocheck/judge.hpp"

namespace depocheck {

/// A summary split into sentences with each sentence's content-token set,
/// computed once and shared by every nugget aligned against it.
struct PreparedSummary {
  std::size_t size = 0;
  std::vector<TextRange> sentences;
  std::vector<std::vector<std::string>> sentence_tokens;
};

PreparedSummary prepare_summary(std::string_view summary);

inline constexpr std::size_t kMaxWindowSentences = 3;
inline constexpr std::size_t kMinNuggetTokens = 6;

/// Lexical-overlap alignment: best window of 1..3 consecutive sentences by
/// coverage of the nugget's content tokens (earliest, then shortest, wins
/// ties), scored against the full/partial thresholds.
AlignmentResult heuristic_align(const Nugget& nugget, const PreparedSummary& summary,
                                const Thresholds& thresholds);

/// accurate: every number in the claim occurs in the span. covered and
/// sufficient: content-token coverage of the claim by the span reaches the
/// coverage and sufficiency thresholds.
CitationVerdict heuristic_verify(std::string_view claim, std::string_view cited_span,
                                 const Thresholds& thresholds);

class HeuristicJudge final : public Judge {
 public:
  explicit HeuristicJudge(JudgeConfig config);

  /// One nugget per answer line with at least six content tokens.
  ExtractionResult extract_nuggets(const Transcript& transcript) const override;
  AlignmentResult align_nugget(const Nugget& nugget, std::string_view summary) const override;
  CitationVerdict verify_citation(std::string_view claim,
                                  std::string_view cited_span) const override;
  std::function<AlignmentResult(const Nugget&)> aligner_for(
      std::string_view summary) const override;
  const JudgeConfig& config() const override { return config_; }

 private:
  JudgeConfig config_;
};

}  // namespace depocheck
