#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace depocheck {

enum class ErrorCode {
  MalformedInput,
  SpanOutOfRange,
  BadSpanRef,
  TranscriptMismatch,
  UnknownNugget,
  InvalidConfig,
  JudgeUnavailable,
  MalformedJudgeResponse,
  IncompleteAlignment,
  MissingVerdicts,
  StoreUnavailable,
  CorruptRecord,
  NotFound,
  Conflict,
};

std::string_view error_code_name(ErrorCode code);

// Every failure the library reports carries one of the codes above; the
// service maps them onto HTTP statuses and the CLI onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace depocheck
