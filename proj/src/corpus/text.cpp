#include "embedkit/corpus/text.hpp"

#include <algorithm>

#include "embedkit/corpus/unicode_tables.hpp"
#include "embedkit/utf8.hpp"

namespace embedkit::corpus {

bool in_ranges(char32_t cp, const CodepointRange* ranges, size_t count) {
  size_t lo = 0, hi = count;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (cp < ranges[mid].lo) {
      hi = mid;
    } else if (cp > ranges[mid].hi) {
      lo = mid + 1;
    } else {
      return true;
    }
  }
  return false;
}

namespace {

bool is_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
    case 0x20: case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_arabic_diacritic(char32_t cp) {
  return (cp >= 0x064B && cp <= 0x0652) || cp == 0x0640;
}

// Joiners that extend an emoji run but are dropped on their own.
bool is_emoji_joiner(char32_t cp) {
  return cp == 0x200D || cp == 0xFE0E || cp == 0xFE0F;
}

// Characters a mention or hashtag body is made of: underscore plus
// anything that is not whitespace, punctuation, symbol or pictograph.
bool is_word_char(char32_t cp) {
  if (cp == U'_') return true;
  return !is_space(cp) && !is_strip_codepoint(cp) && !is_emoji_codepoint(cp) &&
         !is_emoji_joiner(cp);
}

bool match_ci(const std::u32string& s, size_t pos, std::u32string_view word) {
  if (pos + word.size() > s.size()) return false;
  for (size_t k = 0; k < word.size(); ++k) {
    char32_t c = s[pos + k];
    if (c >= U'A' && c <= U'Z') c += 32;
    if (c != word[k]) return false;
  }
  return true;
}

bool at_word_start(const std::u32string& s, size_t pos) {
  return pos == 0 || is_space(s[pos - 1]);
}

void append_ascii(std::u32string& out, std::string_view word) {
  for (char c : word) out.push_back(static_cast<char32_t>(c));
}

// Structural pass: URLs, mentions, hashtags.
std::u32string strip_entities(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  size_t i = 0;
  const size_t n = in.size();
  while (i < n) {
    char32_t c = in[i];
    if (at_word_start(in, i) &&
        (match_ci(in, i, U"http://") || match_ci(in, i, U"https://") ||
         match_ci(in, i, U"www."))) {
      while (i < n && !is_space(in[i])) ++i;
      out.push_back(U' ');
      continue;
    }
    if (c == U'@' && i + 1 < n && is_word_char(in[i + 1])) {
      ++i;
      while (i < n && is_word_char(in[i])) ++i;
      out.push_back(U' ');
      append_ascii(out, kMentionToken);
      out.push_back(U' ');
      continue;
    }
    if (c == U'#' && i + 1 < n && is_word_char(in[i + 1])) {
      ++i;
      while (i < n && is_word_char(in[i])) {
        out.push_back(in[i] == U'_' ? U' ' : in[i]);
        ++i;
      }
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

// Codepoint-class pass: digit runs, emoji runs, stripped classes.
std::u32string map_classes(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  size_t i = 0;
  const size_t n = in.size();
  while (i < n) {
    char32_t c = in[i];
    if (is_digit_codepoint(c)) {
      while (i < n && is_digit_codepoint(in[i])) ++i;
      out.push_back(U'9');
      out.push_back(U'9');
      continue;
    }
    if (is_emoji_codepoint(c)) {
      ++i;
      while (i < n && (is_emoji_codepoint(in[i]) || is_emoji_joiner(in[i])))
        ++i;
      out.push_back(U' ');
      append_ascii(out, kEmojiToken);
      out.push_back(U' ');
      continue;
    }
    if (is_arabic_diacritic(c) || is_strip_codepoint(c) ||
        is_emoji_joiner(c)) {
      ++i;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

// Cuts runs of more than two identical codepoints down to two.
std::u32string squeeze_repeats(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  size_t run = 0;
  for (size_t i = 0; i < in.size(); ++i) {
    if (i > 0 && in[i] == in[i - 1]) {
      ++run;
    } else {
      run = 1;
    }
    if (run <= 2) out.push_back(in[i]);
  }
  return out;
}

std::u32string collapse_whitespace(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  bool pending = false;
  for (char32_t c : in) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) {
      out.push_back(U' ');
      pending = false;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string normalize(std::string_view raw) {
  std::u32string cps = utf8_decode(raw);
  cps = strip_entities(cps);
  cps = map_classes(cps);
  cps = squeeze_repeats(cps);
  cps = collapse_whitespace(cps);
  return utf8_encode(cps);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  size_t start = 0;
  const size_t n = text.size();
  for (size_t i = 0; i <= n; ++i) {
    // Normalized text only contains ASCII space, but accept tabs/newlines
    // so raw corpus lines tokenize sensibly too.
    bool sep = i == n || text[i] == ' ' || text[i] == '\t' ||
               text[i] == '\n' || text[i] == '\r';
    if (sep) {
      if (i > start) tokens.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return tokens;
}

}  // namespace embedkit::corpus
