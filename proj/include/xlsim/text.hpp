#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xlsim::text {

/// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD, one per byte.
std::vector<char32_t> decode_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t cp);

std::string encode_utf8(const std::vector<char32_t>& cps);

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t scalar_count(std::string_view s);

/// Letter test covering Latin, Greek and Cyrillic blocks plus any code point
/// above the symbol ranges (CJK etc.). Digits and punctuation are not letters.
bool is_letter(char32_t cp);

bool is_space(char32_t cp);

/// Simple case folding for ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic.
char32_t to_lower(char32_t cp);

std::string to_lower(std::string_view s);

/// Lowercases and collapses runs of whitespace or '_' into one '_';
/// leading and trailing separators are stripped. Used as the lemma key form.
std::string normalize_lemma(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace xlsim::text
