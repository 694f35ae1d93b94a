#include "depocheck/store.hpp"

#include <algorithm>
#include <system_error>

#include "depocheck/error.hpp"
#include "depocheck/io.hpp"

namespace depocheck {

namespace fs = std::filesystem;

bool is_safe_id(std::string_view id) {
  return !id.empty() && id.size() <= 128 && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

namespace {

void require_safe(std::string_view id) {
  if (!is_safe_id(id)) throw Error(ErrorCode::NotFound, "no record '" + std::string(id) + "'");
}

}  // namespace

Store::Store(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  for (const char* sub : {"transcripts", "banks", "sessions"}) {
    fs::create_directories(root_ / sub, ec);
    if (ec) {
      throw Error(ErrorCode::StoreUnavailable,
                  "cannot create " + (root_ / sub).string() + ": " + ec.message());
    }
  }
}

fs::path Store::session_path(std::string_view id) const {
  require_safe(id);
  return root_ / "sessions" / (std::string(id) + ".json");
}

void Store::persist_session(const Session& session) const {
  atomic_write_file(session_path(session.id), dump_document(to_json(session)));
}

Session Store::load_session(std::string_view id) const {
  const auto path = session_path(id);
  if (!fs::exists(path)) throw Error(ErrorCode::NotFound, "no session '" + std::string(id) + "'");
  const auto text = read_file(path);
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::CorruptRecord, "session '" + std::string(id) + "' is not valid JSON");
  }
  Session s = session_from_json(doc);
  if (s.id != id) throw Error(ErrorCode::CorruptRecord, "session file holds a different id");
  return s;
}

std::vector<std::string> Store::session_ids() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_ / "sessions")) {
    if (entry.path().extension() == ".json") ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void Store::put_transcript(const Transcript& transcript) const {
  require_safe(transcript.id);
  atomic_write_file(root_ / "transcripts" / (transcript.id + ".tsv"),
                    serialize_normalized(transcript));
}

std::optional<Transcript> Store::find_transcript(std::string_view id) const {
  if (!is_safe_id(id)) return std::nullopt;
  const auto path = root_ / "transcripts" / (std::string(id) + ".tsv");
  if (!fs::exists(path)) return std::nullopt;
  try {
    return parse_transcript(read_file(path), TranscriptFormat::Normalized);
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptRecord, "transcript '" + std::string(id) + "': " + e.what());
  }
}

void Store::put_bank(const NuggetBank& bank) const {
  require_safe(bank.transcript_id);
  atomic_write_file(root_ / "banks" / (bank.transcript_id + ".json"), dump_document(to_json(bank)));
}

std::optional<NuggetBank> Store::find_bank(std::string_view transcript_id) const {
  if (!is_safe_id(transcript_id)) return std::nullopt;
  const auto path = root_ / "banks" / (std::string(transcript_id) + ".json");
  if (!fs::exists(path)) return std::nullopt;
  try {
    return bank_from_json(parse_document(read_file(path)));
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptRecord, "bank for '" + std::string(transcript_id) + "': " + e.what());
  }
}

}  // namespace depocheck
