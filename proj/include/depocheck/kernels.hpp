#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "depocheck/judge.hpp"

// Batch loops behind the pipeline. Each kernel has an OpenMP version in
// depocheck::kernels and a plain loop in depocheck::kernels::serial; the two
// must produce identical results and the tests hold them to that.
namespace depocheck::kernels {

/// Runs body(i) for i in [0, n) across OpenMP threads (`threads` = 0 uses
/// the OpenMP default). Once an iteration throws, remaining iterations are
/// skipped and the first exception is rethrown after the loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

/// Aligns every nugget of the bank; keyed by nugget id.
AlignmentMap align_bank(const Judge& judge, const NuggetBank& bank, std::string_view summary);

/// Addresses of answer lines with at least `min_tokens` content tokens
/// once the "A." marker is removed, in document order.
std::vector<LineAddress> qualifying_answer_lines(const Transcript& transcript,
                                                 std::size_t min_tokens);

struct CitationCheck {
  std::string claim;
  std::string cited_text;
};

std::vector<CitationVerdict> verify_citations(const Judge& judge,
                                              const std::vector<CitationCheck>& checks);

namespace serial {

AlignmentMap align_bank(const Judge& judge, const NuggetBank& bank, std::string_view summary);
std::vector<LineAddress> qualifying_answer_lines(const Transcript& transcript,
                                                 std::size_t min_tokens);
std::vector<CitationVerdict> verify_citations(const Judge& judge,
                                              const std::vector<CitationCheck>& checks);

}  // namespace serial

}  // namespace depocheck::kernels
