#pragma once

#include <string>
#include <string_view>

namespace kgcrs::text {

// Normalized text is NFKC case-folded, with every run of Unicode whitespace
// collapsed to a single U+0020 and no leading or trailing whitespace.
std::u32string normalize(std::string_view utf8);
std::string normalize_utf8(std::string_view utf8);

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);

bool is_space(char32_t c);
// Letters, digits and marks; used for word-boundary tests.
bool is_word_char(char32_t c);
// Scripts written without spaces between words (Han, kana, Thai, ...).
bool is_unsegmented(char32_t c);

// Trim ASCII and Unicode whitespace from both ends (no normalization).
std::string trim(std::string_view utf8);

// Collapse runs of spaces and trim; used after template substitution.
std::string collapse_spaces(std::string_view utf8);

}  // namespace kgcrs::text
