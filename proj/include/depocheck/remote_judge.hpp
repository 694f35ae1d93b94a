#pragma once

#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "depocheck/judge.hpp"
#include "json.hpp"

namespace depocheck {

/// Caps the number of concurrent holders.
class InflightLimiter {
 public:
  explicit InflightLimiter(int capacity) : available_(capacity) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return available_ > 0; });
    --available_;
  }
  void release() {
    {
      std::lock_guard lock(mutex_);
      ++available_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int available_;
};

/// A slice of the transcript sent in one extraction request.
struct TranscriptChunk {
  std::vector<LineAddress> lines;
};

/// Groups of `pages_per_chunk` pages, each preceded by the last
/// `overlap_lines` lines of the previous group.
std::vector<TranscriptChunk> chunk_transcript(const Transcript& transcript, int pages_per_chunk = 2,
                                              int overlap_lines = 5);

/// Judge backed by an OpenAI-compatible chat-completion endpoint with
/// JSON-schema constrained output. Transport failures (connection errors,
/// 429, 5xx) are retried with exponential backoff; a reply that fails schema
/// or invariant checks gets one repair re-prompt.
class RemoteJudge final : public Judge {
 public:
  explicit RemoteJudge(JudgeConfig config);

  ExtractionResult extract_nuggets(const Transcript& transcript) const override;
  AlignmentResult align_nugget(const Nugget& nugget, std::string_view summary) const override;
  CitationVerdict verify_citation(std::string_view claim,
                                  std::string_view cited_span) const override;
  const JudgeConfig& config() const override { return config_; }

 private:
  using ReplyCheck = std::function<std::optional<std::string>(const nlohmann::json&)>;

  nlohmann::json complete(std::string_view task, const std::string& prompt,
                          const ReplyCheck& check) const;
  std::string post_with_retries(const nlohmann::json& request) const;

  JudgeConfig config_;
  std::string base_url_;
  std::string path_;
  std::unique_ptr<InflightLimiter> limiter_;
};

}  // namespace depocheck
