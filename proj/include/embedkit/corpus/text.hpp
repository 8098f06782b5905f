#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace embedkit::corpus {

// Placeholder tokens emitted by normalize().
inline constexpr std::string_view kMentionToken = "UserMention";
inline constexpr std::string_view kEmojiToken = "Emojis";

// Normalizes one piece of raw text:
//   - URLs (http://, https://, www.) are removed up to the next whitespace
//   - @mentions become the UserMention placeholder
//   - hashtags lose the '#' and have '_' turned into spaces
//   - every maximal digit run becomes the literal "99"
//   - each maximal run of pictographic codepoints becomes one Emojis token
//   - remaining punctuation and symbol codepoints are dropped, as are the
//     Arabic diacritics U+064B..U+0652 and the tatweel U+0640
//   - any codepoint repeated more than twice in a row is cut back to two
//   - whitespace is collapsed to single spaces and trimmed
//
// Total on valid UTF-8 and idempotent.
std::string normalize(std::string_view raw);

// Splits normalized text on whitespace. Never yields empty tokens.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace embedkit::corpus
