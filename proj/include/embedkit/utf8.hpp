#pragma once

#include <string>
#include <string_view>

namespace embedkit {

// Decodes UTF-8 into codepoints. Invalid byte sequences are skipped.
std::u32string utf8_decode(std::string_view s);

// Appends one codepoint as UTF-8.
void utf8_append(std::string& out, char32_t cp);

std::string utf8_encode(std::u32string_view cps);

}  // namespace embedkit
