#include "depocheck/tokens.hpp"

#include <algorithm>

#include "depocheck/resources.hpp"
#include "text_util.hpp"

namespace depocheck {

namespace {

constexpr std::string_view kStopwordResource = "stopwords-v1.txt";

bool is_ascii_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// U+2013 and U+2014 separate words like '-' does.
bool is_dash_sequence(std::string_view s, std::size_t i) {
  return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
         static_cast<unsigned char>(s[i + 1]) == 0x80 &&
         (static_cast<unsigned char>(s[i + 2]) == 0x93 ||
          static_cast<unsigned char>(s[i + 2]) == 0x94);
}

// Anything in U+2000..U+203F (curly quotes, ellipsis, daggers) is punctuation.
bool is_general_punctuation(std::string_view s, std::size_t i) {
  return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
         (static_cast<unsigned char>(s[i + 1]) == 0x80 ||
          static_cast<unsigned char>(s[i + 1]) == 0x81);
}

std::optional<Token> normalize_word(std::string_view word) {
  Token token;
  bool seen_alnum = false;
  for (std::size_t k = 0; k < word.size(); ++k) {
    char c = word[k];
    if (is_ascii_alnum(c)) {
      token.text += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      seen_alnum = true;
    } else if (c == '$' && !seen_alnum) {
      token.currency = true;
    } else if ((c == '.' || c == ':') && !token.text.empty() && detail::is_digit(token.text.back()) &&
               k + 1 < word.size() && detail::is_digit(word[k + 1])) {
      token.text += c;
    } else if (static_cast<unsigned char>(c) >= 0x80) {
      if (is_general_punctuation(word, k)) {
        k += 2;
      } else {
        token.text += c;
        seen_alnum = true;
      }
    }
  }
  if (token.text.empty()) return std::nullopt;
  if (!token.numeric()) token.currency = false;
  return token;
}

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

bool Token::numeric() const {
  if (text.empty() || !detail::is_digit(text.front())) return false;
  return std::all_of(text.begin(), text.end(),
                     [](char c) { return detail::is_digit(c) || c == '.' || c == ':'; });
}

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> kStopwords = [] {
    std::unordered_set<std::string> words;
    for (auto line : detail::split_lines(resource(kStopwordResource))) {
      auto w = detail::trim(line);
      if (w.empty() || w.front() == '#') continue;
      words.emplace(w);
    }
    return words;
  }();
  return kStopwords;
}

std::string_view stopword_list_name() { return kStopwordResource; }

std::vector<Token> normalize_tokens(std::string_view text) {
  const auto& stop = stopwords();
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto flush = [&](std::size_t begin, std::size_t end) {
    if (end <= begin) return;
    if (auto token = normalize_word(text.substr(begin, end - begin))) {
      if (!stop.contains(token->text)) tokens.push_back(std::move(*token));
    }
  };
  std::size_t word_start = 0;
  while (i < text.size()) {
    char c = text[i];
    if (detail::is_space(c) || c == '-' || c == '/') {
      flush(word_start, i);
      word_start = ++i;
    } else if (is_dash_sequence(text, i)) {
      flush(word_start, i);
      i += 3;
      word_start = i;
    } else {
      ++i;
    }
  }
  flush(word_start, text.size());
  return tokens;
}

std::vector<std::string> content_token_set(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : normalize_tokens(text)) out.push_back(std::move(t.text));
  return sorted_unique(std::move(out));
}

std::vector<std::string> numeric_token_set(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : normalize_tokens(text)) {
    if (t.numeric()) out.push_back(std::move(t.text));
  }
  return sorted_unique(std::move(out));
}

}  // namespace depocheck
