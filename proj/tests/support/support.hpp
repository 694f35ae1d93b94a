#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "depocheck/analysis.hpp"
#include "depocheck/judge.hpp"
#include "depocheck/serialize.hpp"
#include "depocheck/transcript.hpp"

namespace depocheck::testing {

std::filesystem::path samples_dir();
std::filesystem::path fixtures_dir();
std::filesystem::path golden_dir();
std::filesystem::path cli_path();

/// Directory removed with everything in it when the object goes away.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Deterministic PageMarked deposition text: `pages` pages of
/// `lines_per_page` numbered lines alternating Q. and A. turns.
std::string generate_deposition(int pages, int lines_per_page, std::uint32_t seed);

/// Random sentence of `words` words drawn from the same vocabulary as the
/// generated depositions, capitalized and ending with a period.
std::string random_sentence(std::mt19937& rng, int words);

/// A heuristic judge with default thresholds.
std::unique_ptr<Judge> heuristic_judge();

// ---- oracles ---------------------------------------------------------------

/// Text of every line whose address lies within the span, found by walking
/// all lines of the transcript. nullopt if either endpoint is not a line.
std::optional<std::string> brute_force_span(const Transcript& t, const CitationSpan& span);

/// Best coverage over every window of 1..3 consecutive sentences, computed
/// with exact fractions. Ties keep the earliest start, then the shortest window.
struct WindowChoice {
  std::size_t hits = 0;
  std::size_t total = 0;
  std::optional<TextRange> range;
};
WindowChoice brute_force_window(std::string_view nugget_text, std::string_view summary);

/// Description of the first way `report` fails to partition `bank`, if any.
std::optional<std::string> partition_violation(const NuggetBank& bank, const ComparisonReport& report);

/// Canonical form of a span ref written with arbitrary zero padding.
std::string canonical_ref_oracle(int sp, int sl, int ep, int el);

// ---- stub chat-completion endpoint ----------------------------------------

struct StubReply {
  int status = 200;
  std::string content;  // becomes choices[0].message.content
};

/// Local HTTP server answering chat-completion requests through `handler`.
/// `task` is the response_format schema name (extract, align or verify);
/// `attempt` counts messages beyond the first system/user pair, so a repair
/// request has attempt 1.
class StubEndpoint {
 public:
  using Handler = std::function<StubReply(const std::string& task, const Json& request, int attempt)>;
  explicit StubEndpoint(Handler handler);
  ~StubEndpoint();
  StubEndpoint(const StubEndpoint&) = delete;
  StubEndpoint& operator=(const StubEndpoint&) = delete;

  std::string url() const;
  int requests() const { return requests_.load(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<int> requests_{0};
};

/// Well-formed replies: extraction cites the first line of each excerpt,
/// alignment marks everything partially present in the first sentence,
/// verification accepts every citation.
StubReply valid_stub_reply(const std::string& task, const Json& request);

/// Remote judge config aimed at `url` with millisecond backoff.
JudgeConfig stub_judge_config(const std::string& url);

// ---- pipeline --------------------------------------------------------------

/// Every stage of the file pipeline on the bundled sample, run through the
/// command-line entry point. Keys are golden file names.
std::vector<std::pair<std::string, std::string>> run_cli_pipeline(const TempDir& dir);

/// The same reports produced by the HTTP service in memory: bank.json,
/// compare.json and refine.json.
std::vector<std::pair<std::string, std::string>> run_service_pipeline(const TempDir& dir);

std::vector<std::string> golden_names();

}  // namespace depocheck::testing
