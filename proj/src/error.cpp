#include "depocheck/error.hpp"

namespace depocheck {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::SpanOutOfRange: return "SpanOutOfRange";
    case ErrorCode::BadSpanRef: return "BadSpanRef";
    case ErrorCode::TranscriptMismatch: return "TranscriptMismatch";
    case ErrorCode::UnknownNugget: return "UnknownNugget";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::JudgeUnavailable: return "JudgeUnavailable";
    case ErrorCode::MalformedJudgeResponse: return "MalformedJudgeResponse";
    case ErrorCode::IncompleteAlignment: return "IncompleteAlignment";
    case ErrorCode::MissingVerdicts: return "MissingVerdicts";
    case ErrorCode::StoreUnavailable: return "StoreUnavailable";
    case ErrorCode::CorruptRecord: return "CorruptRecord";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Conflict: return "Conflict";
  }
  return "Unknown";
}

}  // namespace depocheck
