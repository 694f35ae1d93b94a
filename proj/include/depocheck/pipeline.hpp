#pragma once

#include <string_view>

#include "depocheck/analysis.hpp"
#include "depocheck/judge.hpp"

// End-to-end workflows shared by the CLI and the service, so both produce
// the same reports from the same inputs.
namespace depocheck {

struct ComparisonRun {
  AlignmentMap alignments_a;
  AlignmentMap alignments_b;
  ComparisonReport report;
};

ComparisonRun run_comparison(const Judge& judge, const NuggetBank& bank, std::string_view summary_a,
                             std::string_view summary_b);

/// Judges every parsed citation of the summary against the transcript.
/// Citations addressing lines that do not exist get an all-false verdict
/// without consulting the judge.
VerdictMap verify_summary_citations(const Judge& judge, const Transcript& transcript,
                                    const SummaryDoc& doc);

struct RefinementRun {
  SummaryDoc doc;
  AlignmentMap alignments;
  VerdictMap verdicts;
  RefinementReport report;
};

RefinementRun run_refinement(const Judge& judge, const Transcript& transcript,
                             const NuggetBank& bank, std::string_view summary);

}  // namespace depocheck
