#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace depocheck {

struct Token {
  std::string text;
  // Set for numeric tokens written with a leading currency sign ("$10").
  bool currency = false;

  bool numeric() const;
  bool operator==(const Token&) const = default;
};

/// Lowercases, strips punctuation, splits on whitespace (hyphens, slashes
/// and dashes also separate words) and drops stopwords. Digit groups keep
/// internal '.' and ':' ("1.5", "3:42") and lose thousands separators
/// ("50,000" -> "50000").
std::vector<Token> normalize_tokens(std::string_view text);

/// Sorted, de-duplicated token texts of normalize_tokens(text).
std::vector<std::string> content_token_set(std::string_view text);

/// Sorted, de-duplicated numeric token texts.
std::vector<std::string> numeric_token_set(std::string_view text);

const std::unordered_set<std::string>& stopwords();
std::string_view stopword_list_name();

}  // namespace depocheck
