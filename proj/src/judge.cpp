#include "depocheck/judge.hpp"

#include <cstdlib>

#include "depocheck/error.hpp"
#include "depocheck/heuristic_judge.hpp"
#include "depocheck/remote_judge.hpp"
#include "text_util.hpp"

namespace depocheck {

namespace {

std::optional<std::string> env(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

}  // namespace

std::string_view judge_kind_name(JudgeKind kind) {
  return kind == JudgeKind::Remote ? "remote" : "heuristic";
}

std::optional<JudgeKind> judge_kind_from_name(std::string_view name) {
  if (detail::iequals(name, "heuristic")) return JudgeKind::Heuristic;
  if (detail::iequals(name, "remote")) return JudgeKind::Remote;
  return std::nullopt;
}

void JudgeConfig::validate() const {
  const auto& t = thresholds;
  if (!(t.partial > 0.0 && t.partial <= t.full && t.full <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig,
                "alignment thresholds must satisfy 0 < partial <= full <= 1");
  }
  if (!(t.coverage > 0.0 && t.coverage <= t.sufficiency && t.sufficiency <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig,
                "citation thresholds must satisfy 0 < coverage <= sufficiency <= 1");
  }
  if (max_inflight < 1) throw Error(ErrorCode::InvalidConfig, "max in-flight requests must be >= 1");
  if (retries < 0 || backoff_ms < 0) {
    throw Error(ErrorCode::InvalidConfig, "retries and backoff must be non-negative");
  }
  if (kind == JudgeKind::Remote && !endpoint_url) {
    throw Error(ErrorCode::InvalidConfig, "remote judge needs an endpoint (NB_LLM_URL)");
  }
}

JudgeConfig JudgeConfig::from_env() {
  JudgeConfig cfg;
  if (auto kind = env("NB_JUDGE")) {
    auto parsed = judge_kind_from_name(*kind);
    if (!parsed) throw Error(ErrorCode::InvalidConfig, "NB_JUDGE must be heuristic or remote");
    cfg.kind = *parsed;
  }
  cfg.endpoint_url = env("NB_LLM_URL");
  cfg.api_key = env("NB_LLM_KEY");
  cfg.model_name = env("NB_LLM_MODEL");
  if (auto cap = env("NB_LLM_MAX_INFLIGHT")) {
    auto parsed = detail::parse_positive(*cap, 4);
    if (!parsed || *parsed == 0) {
      throw Error(ErrorCode::InvalidConfig, "NB_LLM_MAX_INFLIGHT must be a positive integer");
    }
    cfg.max_inflight = *parsed;
  }
  return cfg;
}

std::function<AlignmentResult(const Nugget&)> Judge::aligner_for(std::string_view summary) const {
  return [this, summary](const Nugget& n) { return align_nugget(n, summary); };
}

std::unique_ptr<Judge> make_judge(const JudgeConfig& config) {
  config.validate();
  if (config.kind == JudgeKind::Remote) return std::make_unique<RemoteJudge>(config);
  return std::make_unique<HeuristicJudge>(config);
}

void check_alignment_invariants(const AlignmentResult& r, std::size_t summary_size) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::MalformedJudgeResponse,
                "alignment for " + r.nugget_id + " violates invariants: " + why);
  };
  if (r.score < 0 || r.score > 2) fail("score out of range");
  if (r.score >= 1 && !r.matched_segment) fail("present nugget without a matched segment");
  if (r.score == 0 && r.matched_segment) fail("missing nugget with a matched segment");
  if (r.matched_segment &&
      (r.matched_segment->empty() || r.matched_segment->end > summary_size)) {
    fail("matched segment empty or outside the summary");
  }
}

}  // namespace depocheck
