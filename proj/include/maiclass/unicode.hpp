#pragma once

// Code-point level helpers over ICU. Everything here operates on UTF-8
// std::string at the boundary and on icu::UnicodeString internally.

#include <string>
#include <string_view>

#include <unicode/uchar.h>
#include <unicode/locid.h>
#include <unicode/unistr.h>

namespace maiclass::unicode {

inline icu::UnicodeString from_utf8(std::string_view s) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

inline std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

// Emoji code points. ASCII keycap bases (digits, '#', '*') carry the Emoji
// property but are ordinary text here.
inline bool is_emoji(UChar32 c) {
  if (c < 0x80) return false;
  if (c == 0x200D || c == 0xFE0E || c == 0xFE0F || c == 0x20E3) return true;
  return u_hasBinaryProperty(c, UCHAR_EMOJI) || u_hasBinaryProperty(c, UCHAR_EMOJI_COMPONENT) ||
         u_hasBinaryProperty(c, UCHAR_EXTENDED_PICTOGRAPHIC);
}

// General category P* (Pc, Pd, Ps, Pe, Pi, Pf, Po).
inline bool is_punctuation(UChar32 c) { return u_ispunct(c) != 0; }

inline bool is_whitespace(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

// A code point that still changes under lowercasing.
inline bool is_uppercase(UChar32 c) { return u_tolower(c) != c; }

// Full case folding followed by root-locale lowercasing. Folding alone maps a
// few scripts (Cherokee) to their uppercase forms.
inline icu::UnicodeString fold_lower(icu::UnicodeString s) {
  s.foldCase(U_FOLD_CASE_DEFAULT);
  s.toLower(icu::Locale::getRoot());
  return s;
}

}  // namespace maiclass::unicode
