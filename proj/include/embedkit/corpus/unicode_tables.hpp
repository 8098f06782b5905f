#pragma once

#include <cstddef>
#include <cstdint>

namespace embedkit::corpus {

struct CodepointRange {
  char32_t lo;
  char32_t hi;
};

// Sorted, non-overlapping ranges (see unicode_tables.cpp, generated).
extern const CodepointRange kStripRanges[];
extern const size_t kStripRanges_count;
extern const CodepointRange kDigitRanges[];
extern const size_t kDigitRanges_count;
extern const CodepointRange kEmojiRanges[];
extern const size_t kEmojiRanges_count;

bool in_ranges(char32_t cp, const CodepointRange* ranges, size_t count);

inline bool is_strip_codepoint(char32_t cp) {
  return in_ranges(cp, kStripRanges, kStripRanges_count);
}
inline bool is_digit_codepoint(char32_t cp) {
  return in_ranges(cp, kDigitRanges, kDigitRanges_count);
}
inline bool is_emoji_codepoint(char32_t cp) {
  return in_ranges(cp, kEmojiRanges, kEmojiRanges_count);
}

}  // namespace embedkit::corpus
