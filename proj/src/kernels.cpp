#include "depocheck/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>

#include "depocheck/tokens.hpp"

namespace depocheck::kernels {

namespace {

// Remote judges spend their time waiting on the network, so their loops get
// as many threads as the judge admits requests in flight.
int threads_for(const Judge& judge) {
  const auto& cfg = judge.config();
  if (cfg.kind == JudgeKind::Remote) return std::max(cfg.max_inflight, omp_get_max_threads());
  return omp_get_max_threads();
}

void parallel_for_threads(std::size_t n, int threads,
                          const std::function<void(std::size_t)>& body) {
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

bool qualifies(const Line& line, std::size_t min_tokens) {
  return line.turn == Turn::Answer &&
         normalize_tokens(strip_turn_marker(line.text)).size() >= min_tokens;
}

AlignmentMap to_map(std::vector<AlignmentResult> results) {
  AlignmentMap out;
  for (auto& r : results) {
    auto id = r.nugget_id;
    out.insert_or_assign(std::move(id), std::move(r));
  }
  return out;
}

}  // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads) {
  parallel_for_threads(n, threads > 0 ? threads : omp_get_max_threads(), body);
}

AlignmentMap align_bank(const Judge& judge, const NuggetBank& bank, std::string_view summary) {
  auto align = judge.aligner_for(summary);
  std::vector<AlignmentResult> results(bank.nuggets.size());
  parallel_for_threads(bank.nuggets.size(), threads_for(judge),
                       [&](std::size_t i) { results[i] = align(bank.nuggets[i]); });
  return to_map(std::move(results));
}

std::vector<LineAddress> qualifying_answer_lines(const Transcript& transcript,
                                                 std::size_t min_tokens) {
  std::vector<LineAddress> addresses;
  addresses.reserve(transcript.total_lines());
  for (const auto& page : transcript.pages) {
    for (const auto& line : page.lines) addresses.push_back({page.number, line.number});
  }
  std::vector<char> keep(addresses.size(), 0);
  parallel_for(addresses.size(), [&](std::size_t i) {
    keep[i] = qualifies(*transcript.find_line(addresses[i]), min_tokens) ? 1 : 0;
  });
  std::vector<LineAddress> out;
  for (std::size_t i = 0; i < addresses.size(); ++i) {
    if (keep[i]) out.push_back(addresses[i]);
  }
  return out;
}

std::vector<CitationVerdict> verify_citations(const Judge& judge,
                                              const std::vector<CitationCheck>& checks) {
  std::vector<CitationVerdict> out(checks.size());
  parallel_for_threads(checks.size(), threads_for(judge), [&](std::size_t i) {
    out[i] = judge.verify_citation(checks[i].claim, checks[i].cited_text);
  });
  return out;
}

namespace serial {

AlignmentMap align_bank(const Judge& judge, const NuggetBank& bank, std::string_view summary) {
  std::vector<AlignmentResult> results;
  results.reserve(bank.nuggets.size());
  for (const auto& n : bank.nuggets) results.push_back(judge.align_nugget(n, summary));
  return to_map(std::move(results));
}

std::vector<LineAddress> qualifying_answer_lines(const Transcript& transcript,
                                                 std::size_t min_tokens) {
  std::vector<LineAddress> out;
  for (const auto& page : transcript.pages) {
    for (const auto& line : page.lines) {
      if (qualifies(line, min_tokens)) out.push_back({page.number, line.number});
    }
  }
  return out;
}

std::vector<CitationVerdict> verify_citations(const Judge& judge,
                                              const std::vector<CitationCheck>& checks) {
  std::vector<CitationVerdict> out;
  out.reserve(checks.size());
  for (const auto& c : checks) out.push_back(judge.verify_citation(c.claim, c.cited_text));
  return out;
}

}  // namespace serial

}  // namespace depocheck::kernels
