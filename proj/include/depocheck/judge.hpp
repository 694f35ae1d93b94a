#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depocheck/nuggets.hpp"
#include "depocheck/sentences.hpp"
#include "depocheck/transcript.hpp"

namespace depocheck {

/// How well one nugget is represented in one summary: 2 fully present,
/// 1 partially present, 0 missing.
struct AlignmentResult {
  std::string nugget_id;
  int score = 0;
  // Present iff score >= 1; a non-empty range within the summary.
  std::optional<TextRange> matched_segment;
  std::string explanation;
  // Parts of the nugget absent from the matched segment.
  std::vector<std::string> absent;

  bool operator==(const AlignmentResult&) const = default;
};

using AlignmentMap = std::map<std::string, AlignmentResult, NuggetIdLess>;

struct CitationVerdict {
  bool accurate = false;
  bool covered = false;
  bool sufficient = false;
  std::string rationale;

  bool all_true() const { return accurate && covered && sufficient; }
  bool operator==(const CitationVerdict&) const = default;
};

enum class JudgeKind { Heuristic, Remote };

std::string_view judge_kind_name(JudgeKind kind);
std::optional<JudgeKind> judge_kind_from_name(std::string_view name);

struct Thresholds {
  double full = 0.8;
  double partial = 0.4;
  double sufficiency = 0.9;
  double coverage = 0.5;
};

struct JudgeConfig {
  JudgeKind kind = JudgeKind::Heuristic;
  std::optional<std::string> endpoint_url;
  std::optional<std::string> api_key;
  std::optional<std::string> model_name;
  Thresholds thresholds;
  int max_inflight = 4;
  int retries = 3;
  // Backoff before retry k (1-based) is backoff_ms * 2^(k-1).
  int backoff_ms = 1000;
  int timeout_seconds = 120;

  /// Throws Error(InvalidConfig) unless 0 < partial <= full <= 1,
  /// 0 < coverage <= sufficiency <= 1, and a Remote config names an endpoint.
  void validate() const;

  /// Reads NB_JUDGE, NB_LLM_URL, NB_LLM_KEY, NB_LLM_MODEL and
  /// NB_LLM_MAX_INFLIGHT on top of the defaults.
  static JudgeConfig from_env();
};

struct ExtractionResult {
  NuggetBank bank;
  std::vector<std::string> warnings;
};

/// The three judging capabilities. Implementations are stateless from the
/// caller's point of view and safe to call from several threads at once.
class Judge {
 public:
  virtual ~Judge() = default;

  virtual ExtractionResult extract_nuggets(const Transcript& transcript) const = 0;
  virtual AlignmentResult align_nugget(const Nugget& nugget, std::string_view summary) const = 0;
  virtual CitationVerdict verify_citation(std::string_view claim,
                                          std::string_view cited_span) const = 0;

  /// Returns a callable aligning nuggets against a fixed summary. Judges
  /// that can reuse per-summary work override this; the default forwards
  /// to align_nugget. The callable borrows `summary`.
  virtual std::function<AlignmentResult(const Nugget&)> aligner_for(
      std::string_view summary) const;

  virtual const JudgeConfig& config() const = 0;
};

std::unique_ptr<Judge> make_judge(const JudgeConfig& config);

/// Throws Error(MalformedJudgeResponse) if `result` breaks an
/// AlignmentResult invariant for a summary of `summary_size` bytes.
void check_alignment_invariants(const AlignmentResult& result, std::size_t summary_size);

}  // namespace depocheck
