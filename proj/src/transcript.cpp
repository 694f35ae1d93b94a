#include "depocheck/transcript.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "depocheck/error.hpp"
#include "depocheck/io.hpp"
#include "text_util.hpp"

namespace depocheck {

using detail::is_digit;
using detail::is_space;
using detail::trim;

namespace {

constexpr std::string_view kNormalizedHeader = "page\tline\tturn\ttext";

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorCode::MalformedInput, message);
}

// Matches `=== PAGE <n> ===` with flexible whitespace, case-insensitive.
std::optional<int> match_page_marker(std::string_view line) {
  auto s = trim(line);
  if (s.size() < 6 || s.substr(0, 3) != "===" || s.substr(s.size() - 3) != "===") {
    return std::nullopt;
  }
  auto inner = trim(s.substr(3, s.size() - 6));
  if (inner.size() < 5 || !detail::iequals(inner.substr(0, 4), "page") || !is_space(inner[4])) {
    return std::nullopt;
  }
  return detail::parse_positive(trim(inner.substr(4)));
}

struct NumberedLine {
  int number;
  std::string_view text;
};

// Leading line number: up to three digits followed by whitespace or end of line.
std::optional<NumberedLine> match_line_number(std::string_view line) {
  auto s = detail::trim_left(line);
  std::size_t digits = 0;
  while (digits < s.size() && is_digit(s[digits])) ++digits;
  if (digits == 0 || digits > 3) return std::nullopt;
  if (digits < s.size() && !is_space(s[digits])) return std::nullopt;
  auto number = detail::parse_positive(s.substr(0, digits));
  if (!number || *number == 0) return std::nullopt;
  return NumberedLine{*number, detail::trim_left(s.substr(digits))};
}

bool starts_with_word(std::string_view s, std::string_view word) {
  if (s.substr(0, word.size()) != word) return false;
  if (s.size() == word.size()) return true;
  char next = s[word.size()];
  return !std::isalnum(static_cast<unsigned char>(next));
}

void check_page_sequence(int previous, int next, const ParseOptions& options) {
  if (previous == 0) {
    if (next != 1 && !options.allow_page_gaps) {
      malformed("first page is " + std::to_string(next) + ", expected 1");
    }
    return;
  }
  if (next <= previous) {
    malformed("page numbers not increasing: " + std::to_string(previous) + " then " +
              std::to_string(next));
  }
  if (next != previous + 1 && !options.allow_page_gaps) {
    malformed("page gap: " + std::to_string(previous) + " then " + std::to_string(next));
  }
}

Page build_page(int number, const std::vector<std::string_view>& raw_lines) {
  Page page{number, {}};
  bool any_content = false;
  bool all_numbered = true;
  for (auto l : raw_lines) {
    if (trim(l).empty()) continue;
    any_content = true;
    if (!match_line_number(l)) all_numbered = false;
  }

  if (any_content && all_numbered) {
    for (auto l : raw_lines) {
      if (trim(l).empty()) continue;
      auto numbered = match_line_number(l);
      int expected = static_cast<int>(page.lines.size()) + 1;
      if (numbered->number != expected) {
        bool duplicate = std::any_of(page.lines.begin(), page.lines.end(),
                                     [&](const Line& x) { return x.number == numbered->number; });
        malformed(std::string(duplicate ? "duplicate" : "non-contiguous") + " line number " +
                  std::to_string(numbered->number) + " on page " + std::to_string(number));
      }
      std::string text(numbered->text);
      page.lines.push_back({numbered->number, text, classify_turn(text)});
    }
  } else {
    for (auto l : raw_lines) {
      std::string text(l);
      page.lines.push_back({static_cast<int>(page.lines.size()) + 1, text, classify_turn(text)});
    }
  }
  if (page.lines.empty()) {
    malformed("page " + std::to_string(number) + " has no lines");
  }
  return page;
}

Transcript parse_page_marked(std::string_view raw, const ParseOptions& options) {
  Transcript t;
  std::vector<std::string_view> pending;
  int current = 0;
  for (auto line : detail::split_lines(raw)) {
    if (auto marker = match_page_marker(line)) {
      if (current != 0) t.pages.push_back(build_page(current, pending));
      check_page_sequence(current, *marker, options);
      current = *marker;
      pending.clear();
      continue;
    }
    if (current == 0) {
      if (!trim(line).empty()) malformed("text before the first page marker");
      continue;
    }
    pending.push_back(line);
  }
  if (current == 0) malformed("no page markers found");
  t.pages.push_back(build_page(current, pending));
  return t;
}

std::vector<std::string_view> split_fields(std::string_view line, std::size_t max_fields) {
  std::vector<std::string_view> fields;
  while (fields.size() + 1 < max_fields) {
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) break;
    fields.push_back(line.substr(0, tab));
    line.remove_prefix(tab + 1);
  }
  fields.push_back(line);
  return fields;
}

Transcript parse_normalized(std::string_view raw, const ParseOptions& options) {
  Transcript t;
  auto lines = detail::split_lines(raw);
  std::size_t i = 0;
  for (; i < lines.size() && !lines[i].empty() && lines[i].front() == '#'; ++i) {
    auto fields = split_fields(lines[i].substr(1), 2);
    if (fields.size() != 2) malformed("bad metadata line: " + std::string(lines[i]));
    if (fields[0] == "title") {
      t.title = std::string(fields[1]);
    } else if (fields[0] == "deponent") {
      t.deponent = std::string(fields[1]);
    } else {
      malformed("unknown metadata key: " + std::string(fields[0]));
    }
  }
  if (i >= lines.size() || lines[i] != kNormalizedHeader) {
    malformed("missing normalized header row");
  }
  ++i;
  int current = 0;
  for (; i < lines.size(); ++i) {
    auto fields = split_fields(lines[i], 4);
    if (fields.size() != 4) {
      malformed("record " + std::to_string(i + 1) + " does not have four fields");
    }
    auto page_no = detail::parse_positive(fields[0]);
    auto line_no = detail::parse_positive(fields[1]);
    auto turn = turn_from_name(fields[2]);
    if (!page_no || *page_no == 0 || !line_no || *line_no == 0 || !turn) {
      malformed("record " + std::to_string(i + 1) + " has an invalid page, line or turn");
    }
    if (*page_no != current) {
      check_page_sequence(current, *page_no, options);
      current = *page_no;
      t.pages.push_back({current, {}});
    }
    auto& page = t.pages.back();
    int expected = static_cast<int>(page.lines.size()) + 1;
    if (*line_no != expected) {
      malformed(std::string(*line_no < expected ? "duplicate" : "non-contiguous") +
                " line number " + std::to_string(*line_no) + " on page " +
                std::to_string(current));
    }
    page.lines.push_back({*line_no, std::string(fields[3]), *turn});
  }
  if (t.pages.empty()) malformed("normalized transcript has no records");
  return t;
}

void append_records(std::string& out, const Transcript& t) {
  for (const auto& page : t.pages) {
    for (const auto& line : page.lines) {
      out += std::to_string(page.number);
      out += '\t';
      out += std::to_string(line.number);
      out += '\t';
      out += turn_name(line.turn);
      out += '\t';
      out += line.text;
      out += '\n';
    }
  }
}

}  // namespace

std::string_view turn_name(Turn turn) {
  switch (turn) {
    case Turn::Question: return "question";
    case Turn::Answer: return "answer";
    case Turn::Colloquy: return "colloquy";
    case Turn::Other: return "other";
  }
  return "other";
}

std::optional<Turn> turn_from_name(std::string_view name) {
  static constexpr std::array kTurns = {Turn::Question, Turn::Answer, Turn::Colloquy, Turn::Other};
  for (auto t : kTurns) {
    if (turn_name(t) == name) return t;
  }
  return std::nullopt;
}

std::optional<TranscriptFormat> transcript_format_from_name(std::string_view name) {
  if (detail::iequals(name, "pagemarked")) return TranscriptFormat::PageMarked;
  if (detail::iequals(name, "normalized")) return TranscriptFormat::Normalized;
  return std::nullopt;
}

std::size_t Transcript::total_lines() const {
  std::size_t n = 0;
  for (const auto& p : pages) n += p.lines.size();
  return n;
}

const Page* Transcript::find_page(int number) const {
  auto it = std::lower_bound(pages.begin(), pages.end(), number,
                             [](const Page& p, int n) { return p.number < n; });
  if (it == pages.end() || it->number != number) return nullptr;
  return &*it;
}

const Line* Transcript::find_line(LineAddress address) const {
  const Page* page = find_page(address.page);
  if (page == nullptr || address.line < 1 ||
      address.line > static_cast<int>(page->lines.size())) {
    return nullptr;
  }
  return &page->lines[address.line - 1];
}

Turn classify_turn(std::string_view text) {
  auto s = detail::trim_left(text);
  auto marker = [&](char c) {
    return s.size() >= 2 && s[0] == c && (s[1] == '.' || s[1] == ':') &&
           (s.size() == 2 || is_space(s[2]));
  };
  if (marker('Q')) return Turn::Question;
  if (marker('A')) return Turn::Answer;
  for (std::string_view tag : {"MR.", "MS.", "MRS."}) {
    if (s.substr(0, tag.size()) == tag && (s.size() == tag.size() || is_space(s[tag.size()]))) {
      return Turn::Colloquy;
    }
  }
  if (starts_with_word(s, "THE COURT") || starts_with_word(s, "THE WITNESS")) {
    return Turn::Colloquy;
  }
  return Turn::Other;
}

std::string_view strip_turn_marker(std::string_view text) {
  auto s = detail::trim_left(text);
  auto turn = classify_turn(s);
  if (turn == Turn::Question || turn == Turn::Answer) {
    return detail::trim_left(s.substr(2));
  }
  return s;
}

Transcript parse_transcript(std::string_view raw, TranscriptFormat format,
                            const ParseOptions& options) {
  if (trim(raw).empty()) malformed("empty transcript");
  Transcript t = format == TranscriptFormat::PageMarked ? parse_page_marked(raw, options)
                                                        : parse_normalized(raw, options);
  t.id = transcript_id_for(t);
  return t;
}

std::string serialize_normalized(const Transcript& t) {
  std::string out;
  if (t.title) out += "#title\t" + *t.title + "\n";
  if (t.deponent) out += "#deponent\t" + *t.deponent + "\n";
  out += kNormalizedHeader;
  out += '\n';
  append_records(out, t);
  return out;
}

std::string transcript_id_for(const Transcript& t) {
  std::string records;
  append_records(records, t);
  return "t" + hex64(fnv1a64(records));
}

bool span_resolves(const Transcript& t, const CitationSpan& s) {
  return s.start() <= s.end() && t.find_line(s.start()) != nullptr &&
         t.find_line(s.end()) != nullptr;
}

std::string resolve_span(const Transcript& t, const CitationSpan& s) {
  if (s.end() < s.start()) {
    throw Error(ErrorCode::BadSpanRef, "inverted span " + format_span_ref(s));
  }
  if (t.find_line(s.start()) == nullptr || t.find_line(s.end()) == nullptr) {
    throw Error(ErrorCode::SpanOutOfRange,
                "span " + format_span_ref(s) + " is outside transcript " + t.id);
  }
  std::string out;
  bool first = true;
  const Page* start_page = t.find_page(s.start_page);
  for (auto page = t.pages.begin() + (start_page - t.pages.data()); page != t.pages.end();
       ++page) {
    if (page->number > s.end_page) break;
    int from = page->number == s.start_page ? s.start_line : 1;
    int to = page->number == s.end_page ? s.end_line : static_cast<int>(page->lines.size());
    for (int l = from; l <= to; ++l) {
      if (!first) out += '\n';
      out += page->lines[l - 1].text;
      first = false;
    }
  }
  return out;
}

CitationSpan parse_span_ref(std::string_view ref) {
  auto bad = [&](const std::string& why) -> Error {
    return Error(ErrorCode::BadSpanRef, "bad span ref '" + std::string(ref) + "': " + why);
  };
  auto s = trim(ref);
  auto parse_address = [&](std::string_view part) {
    auto colon = part.find(':');
    if (colon == std::string_view::npos) throw bad("expected P:L");
    auto page = detail::parse_positive(part.substr(0, colon));
    auto line = detail::parse_positive(part.substr(colon + 1));
    if (!page || !line) throw bad("components must be decimal integers");
    if (*page == 0 || *line == 0) throw bad("components must be at least 1");
    return LineAddress{*page, *line};
  };
  auto dash = s.find('-');
  LineAddress start = parse_address(s.substr(0, dash));
  LineAddress end = dash == std::string_view::npos ? start : parse_address(s.substr(dash + 1));
  if (end < start) throw bad("range is inverted");
  return {start.page, start.line, end.page, end.line};
}

std::string format_span_ref(const CitationSpan& s) {
  auto address = [](int page, int line) {
    std::string out = std::to_string(page) + ":";
    if (line < 10) out += '0';
    out += std::to_string(line);
    return out;
  };
  std::string out = address(s.start_page, s.start_line);
  if (s.end() != s.start()) out += "-" + address(s.end_page, s.end_line);
  return out;
}

}  // namespace depocheck
