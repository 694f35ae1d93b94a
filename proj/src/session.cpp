#include "depocheck/session.hpp"

#include "depocheck/error.hpp"

namespace depocheck {

std::string_view session_kind_name(SessionKind kind) {
  return kind == SessionKind::Comparison ? "comparison" : "refinement";
}

std::optional<SessionKind> session_kind_from_name(std::string_view name) {
  if (name == "comparison") return SessionKind::Comparison;
  if (name == "refinement") return SessionKind::Refinement;
  return std::nullopt;
}

std::string_view session_state_name(SessionState state) {
  switch (state) {
    case SessionState::Pending: return "pending";
    case SessionState::Running: return "running";
    case SessionState::Ready: return "ready";
    case SessionState::Failed: return "failed";
  }
  return "pending";
}

std::optional<SessionState> session_state_from_name(std::string_view name) {
  for (auto s : {SessionState::Pending, SessionState::Running, SessionState::Ready, SessionState::Failed}) {
    if (session_state_name(s) == name) return s;
  }
  return std::nullopt;
}

Json session_report_json(const Session& s) {
  if (s.state != SessionState::Ready) return nullptr;
  if (s.comparison) return to_json(*s.comparison);
  if (s.refinement) return to_json(*s.refinement);
  return nullptr;
}

Json to_json(const Session& s) {
  Json summaries = Json::array();
  for (const auto& in : s.summaries) summaries.push_back({{"id", in.id}, {"text", in.text}});
  Json alignments = Json::array();
  for (const auto& a : s.alignments) alignments.push_back(to_json(a));
  return {{"id", s.id},
          {"kind", session_kind_name(s.kind)},
          {"transcript_id", s.transcript_id},
          {"summaries", summaries},
          {"bank", s.bank ? to_json(*s.bank) : Json(nullptr)},
          {"alignments", alignments},
          {"verdicts", to_json(s.verdicts)},
          {"report", session_report_json(s)},
          {"status", {{"state", session_state_name(s.state)}, {"message", s.message}}}};
}

Session session_from_json(const Json& doc) {
  try {
    Session s;
    s.id = doc.at("id").get<std::string>();
    auto kind = session_kind_from_name(doc.at("kind").get<std::string>());
    auto state = session_state_from_name(doc.at("status").at("state").get<std::string>());
    if (!kind || !state) throw Error(ErrorCode::MalformedInput, "unknown kind or state");
    s.kind = *kind;
    s.state = *state;
    s.message = doc.at("status").at("message").get<std::string>();
    s.transcript_id = doc.at("transcript_id").get<std::string>();
    for (const auto& in : doc.at("summaries")) {
      s.summaries.push_back({in.at("id").get<std::string>(), in.at("text").get<std::string>()});
    }
    if (s.summaries.size() != s.expected_summaries()) {
      throw Error(ErrorCode::MalformedInput, "wrong number of summaries for the session kind");
    }
    if (!doc.at("bank").is_null()) s.bank = bank_from_json(doc["bank"]);
    for (const auto& a : doc.at("alignments")) s.alignments.push_back(alignment_map_from_json(a));
    s.verdicts = verdict_map_from_json(doc.at("verdicts"));
    const auto& report = doc.at("report");
    if (s.state == SessionState::Ready) {
      if (report.is_null()) throw Error(ErrorCode::MalformedInput, "ready session without report");
      if (s.kind == SessionKind::Comparison) {
        s.comparison = comparison_from_json(report);
      } else {
        s.refinement = refinement_from_json(report);
      }
    } else if (!report.is_null()) {
      throw Error(ErrorCode::MalformedInput, "report present before the session is ready");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptRecord, std::string("session record: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptRecord, std::string("session record: ") + e.what());
  }
}

}  // namespace depocheck
