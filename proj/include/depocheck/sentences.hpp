#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace depocheck {

/// Half-open byte range [begin, end) into a text.
struct TextRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin >= end; }
  bool overlaps(const TextRange& other) const {
    return begin < other.end && other.begin < end;
  }
  bool operator==(const TextRange&) const = default;
};

/// Sentence boundaries: '.', '?' or '!' (optionally followed by closing
/// quotes or brackets) then whitespace and an uppercase letter. "Mr.",
/// "Mrs.", "Ms.", "Dr.", "No." and "Inc." never end a sentence. A blank line
/// always ends one. Returned ranges exclude surrounding whitespace, are in
/// order and do not overlap; everything between them is whitespace.
std::vector<TextRange> segment_sentences(std::string_view text);

}  // namespace depocheck
