#include "depocheck/sentences.hpp"

#include <array>
#include <string_view>

#include "text_util.hpp"

namespace depocheck {

namespace {

constexpr std::array<std::string_view, 6> kAbbreviations = {"Mr", "Mrs", "Ms", "Dr", "No", "Inc"};

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

// U+2019 and U+201D.
bool is_utf8_closer(std::string_view s, std::size_t i) {
  return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
         static_cast<unsigned char>(s[i + 1]) == 0x80 &&
         (static_cast<unsigned char>(s[i + 2]) == 0x99 ||
          static_cast<unsigned char>(s[i + 2]) == 0x9D);
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

// True when the '.' at `dot` closes one of the known abbreviations.
bool ends_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !detail::is_space(text[begin - 1]) && text[begin - 1] != '(' &&
         text[begin - 1] != '"') {
    --begin;
  }
  auto word = text.substr(begin, dot - begin);
  for (auto abbr : kAbbreviations) {
    if (word == abbr) return true;
  }
  return false;
}

}  // namespace

std::vector<TextRange> segment_sentences(std::string_view text) {
  std::vector<TextRange> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n && detail::is_space(text[i])) ++i;
  std::size_t start = i;
  std::size_t last_content_end = start;

  while (i < n) {
    char c = text[i];
    if (detail::is_space(c)) {
      std::size_t k = i;
      int newlines = 0;
      while (k < n && detail::is_space(text[k])) {
        if (text[k] == '\n') ++newlines;
        ++k;
      }
      if (newlines >= 2 && k < n && last_content_end > start) {
        out.push_back({start, last_content_end});
        start = k;
      }
      i = k;
      continue;
    }
    if (is_terminator(c)) {
      std::size_t j = i + 1;
      while (j < n) {
        if (is_terminator(text[j]) || is_closer(text[j])) {
          ++j;
        } else if (is_utf8_closer(text, j)) {
          j += 3;
        } else {
          break;
        }
      }
      last_content_end = j;
      if (j >= n) {
        i = j;
        break;
      }
      if (detail::is_space(text[j])) {
        std::size_t k = j;
        while (k < n && detail::is_space(text[k])) ++k;
        if (k < n && is_upper(text[k]) && !(c == '.' && j == i + 1 && ends_abbreviation(text, i))) {
          out.push_back({start, j});
          start = k;
          last_content_end = k;
          i = k;
          continue;
        }
      }
      i = j;
      continue;
    }
    ++i;
    last_content_end = i;
  }
  if (last_content_end > start) out.push_back({start, last_content_end});
  return out;
}

}  // namespace depocheck
