#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace depocheck {

enum class Turn { Question, Answer, Colloquy, Other };

std::string_view turn_name(Turn turn);
std::optional<Turn> turn_from_name(std::string_view name);

struct Line {
  int number = 0;
  std::string text;
  Turn turn = Turn::Other;

  bool operator==(const Line&) const = default;
};

struct Page {
  int number = 0;
  std::vector<Line> lines;

  bool operator==(const Page&) const = default;
};

/// A page:line address into a transcript.
struct LineAddress {
  int page = 0;
  int line = 0;

  auto operator<=>(const LineAddress&) const = default;
};

/// Inclusive range of transcript lines, possibly crossing pages.
struct CitationSpan {
  int start_page = 0;
  int start_line = 0;
  int end_page = 0;
  int end_line = 0;

  LineAddress start() const { return {start_page, start_line}; }
  LineAddress end() const { return {end_page, end_line}; }

  auto operator<=>(const CitationSpan&) const = default;
};

struct Transcript {
  std::string id;
  std::vector<Page> pages;
  std::optional<std::string> title;
  std::optional<std::string> deponent;

  std::size_t total_lines() const;
  const Page* find_page(int number) const;
  const Line* find_line(LineAddress address) const;

  bool operator==(const Transcript&) const = default;
};

enum class TranscriptFormat { PageMarked, Normalized };

std::optional<TranscriptFormat> transcript_format_from_name(std::string_view name);

struct ParseOptions {
  // Accept page numbers that skip values (and a first page other than 1),
  // as found in transcript excerpts. Strict increase is always required.
  bool allow_page_gaps = false;
};

/// Classifies one line of testimony by its leading token: "Q."/"Q:" is a
/// question, "A."/"A:" an answer, a speaker tag (MR., MS., MRS., THE COURT,
/// THE WITNESS) is colloquy.
Turn classify_turn(std::string_view text);

/// Strips a leading "Q."/"Q:"/"A."/"A:" marker and the whitespace after it.
std::string_view strip_turn_marker(std::string_view text);

/// Parses raw transcript text. Throws Error(MalformedInput).
Transcript parse_transcript(std::string_view raw, TranscriptFormat format,
                            const ParseOptions& options = {});

/// Tab-separated records under the header `page\tline\tturn\ttext`.
/// Metadata, when present, precedes the header as `#title\t...` and
/// `#deponent\t...` lines.
std::string serialize_normalized(const Transcript& transcript);

/// Content-derived transcript identifier; identical structures yield
/// identical ids regardless of the input format they came from.
std::string transcript_id_for(const Transcript& transcript);

/// Newline-joined text of every line in the span, in document order.
/// Throws Error(SpanOutOfRange) if either endpoint does not exist.
std::string resolve_span(const Transcript& transcript, const CitationSpan& span);

bool span_resolves(const Transcript& transcript, const CitationSpan& span);

/// Grammar: "P:L-P:L" or "P:L" with decimal components >= 1.
/// Throws Error(BadSpanRef).
CitationSpan parse_span_ref(std::string_view ref);

/// Canonical form: page unpadded, line zero-padded to two digits, single
/// line spans in shorthand ("12:05-12:18", "7:03").
std::string format_span_ref(const CitationSpan& span);

}  // namespace depocheck
