#pragma once

#include <string>
#include <string_view>

namespace lexidepth::unicode {

// Decodes UTF-8 into Unicode scalar values. Throws InvalidEncoding on
// malformed input (overlong encodings, surrogates, truncated sequences).
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(std::u32string_view s);

// Canonical composition (NFC) per UAX #15, table-driven with algorithmic
// Hangul handling.
std::u32string nfc(std::u32string_view s);

// Simple case folding: 1:1 lowercase mappings only; scalars whose
// lowercase expands to multiple scalars are left unchanged.
std::u32string to_lower(std::u32string_view s);

// strip ASCII whitespace from both ends
std::string_view trim(std::string_view s);

}  // namespace lexidepth::unicode
