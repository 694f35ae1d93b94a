#include "depocheck/pipeline.hpp"

#include "depocheck/kernels.hpp"

namespace depocheck {

ComparisonRun run_comparison(const Judge& judge, const NuggetBank& bank, std::string_view summary_a,
                             std::string_view summary_b) {
  ComparisonRun run;
  run.alignments_a = kernels::align_bank(judge, bank, summary_a);
  run.alignments_b = kernels::align_bank(judge, bank, summary_b);
  run.report = compare_summaries(bank, run.alignments_a, run.alignments_b);
  return run;
}

VerdictMap verify_summary_citations(const Judge& judge, const Transcript& transcript,
                                    const SummaryDoc& doc) {
  struct Slot {
    std::size_t segment;
    std::optional<std::size_t> check;
    std::string missing_ref;
  };
  std::vector<kernels::CitationCheck> checks;
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    const auto& seg = doc.segments[i];
    const auto claim = segment_claim_text(seg);
    for (const auto& ref : seg.refs) {
      if (!ref.span) continue;
      if (!span_resolves(transcript, *ref.span)) {
        slots.push_back({i, std::nullopt, format_span_ref(*ref.span)});
        continue;
      }
      slots.push_back({i, checks.size(), {}});
      checks.push_back({claim, resolve_span(transcript, *ref.span)});
    }
  }
  auto judged = kernels::verify_citations(judge, checks);
  VerdictMap out;
  for (const auto& slot : slots) {
    if (slot.check) {
      out[slot.segment].push_back(judged[*slot.check]);
    } else {
      out[slot.segment].push_back(
          {false, false, false, "cited span " + slot.missing_ref + " does not exist in the transcript"});
    }
  }
  return out;
}

RefinementRun run_refinement(const Judge& judge, const Transcript& transcript,
                             const NuggetBank& bank, std::string_view summary) {
  RefinementRun run;
  run.doc = segment_summary(summary);
  run.alignments = kernels::align_bank(judge, bank, summary);
  run.verdicts = verify_summary_citations(judge, transcript, run.doc);
  run.report = build_refinement_report(run.doc, bank, run.alignments, run.verdicts);
  return run;
}

}  // namespace depocheck
