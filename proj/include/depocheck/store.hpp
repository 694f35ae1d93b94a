#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "depocheck/nuggets.hpp"
#include "depocheck/session.hpp"
#include "depocheck/transcript.hpp"

namespace depocheck {

/// File-backed persistence under one data directory:
///   transcripts/<id>.tsv   normalized transcript
///   banks/<transcript id>.json
///   sessions/<id>.json
/// Every write goes through a temporary file and a rename. The store does
/// no locking of its own; callers serialize writes per record.
class Store {
 public:
  /// Creates the directory layout. Throws Error(StoreUnavailable).
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  void persist_session(const Session& session) const;
  /// Throws Error(NotFound) or Error(CorruptRecord).
  Session load_session(std::string_view id) const;
  std::vector<std::string> session_ids() const;

  void put_transcript(const Transcript& transcript) const;
  /// Throws Error(CorruptRecord) if the stored file does not parse.
  std::optional<Transcript> find_transcript(std::string_view id) const;

  void put_bank(const NuggetBank& bank) const;
  std::optional<NuggetBank> find_bank(std::string_view transcript_id) const;

  std::filesystem::path session_path(std::string_view id) const;

 private:
  std::filesystem::path root_;
};

/// Ids double as file names: letters, digits, '-' and '_' only.
bool is_safe_id(std::string_view id);

}  // namespace depocheck
