#pragma once

// UTF-8 handling and the canonical tokenizer shared by every module.
//
// Tokens are lowercased runs of word characters. An apostrophe or hyphen
// between two word characters stays inside the token ("don't",
// "co-operate"); typographic variants (U+2019, U+2010, U+2011) are folded to
// their ASCII form. Everything else that is not whitespace is punctuation and
// ends the current token.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfp::text {

struct Token {
  std::string text;
  // True when punctuation separates this token from the previous one (or
  // when it is the first token). Multiword candidates never span a break.
  bool after_break = false;
};

namespace detail {

struct Decoded {
  char32_t cp = 0;
  std::size_t len = 0;  // 0 marks an invalid sequence
};

inline Decoded decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2; cp = b0 & 0x1F; min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3; cp = b0 & 0x0F; min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4; cp = b0 & 0x07; min = 0x10000;
  } else {
    return {};
  }
  if (i + len > s.size()) return {};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {};
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {};
  return {cp, len};
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace detail

inline bool is_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline bool is_joiner(char32_t cp) {
  return cp == U'\'' || cp == U'-' || cp == 0x2019 || cp == 0x02BC || cp == 0x2010 ||
         cp == 0x2011;
}

inline bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9');
  }
  if (is_space(cp)) return false;
  if (cp >= 0x80 && cp <= 0xBF) return false;  // C1 controls, Latin-1 punctuation and signs
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // general punctuation, currency, arrows, symbols
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  return true;
}

// ASCII and Latin-1 letters only; other scripts pass through unchanged.
inline char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

inline bool is_upper(char32_t cp) {
  return (cp >= U'A' && cp <= U'Z') || (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7);
}

inline bool is_lower(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= 0xDF && cp <= 0xFF && cp != 0xF7);
}

// Byte offset of the first offending byte, or nullopt for well-formed text.
// Rejects invalid UTF-8 and C0 control bytes other than ordinary whitespace.
inline std::optional<std::size_t> find_invalid_text(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto d = detail::decode(s, i);
    if (d.len == 0) return i;
    if (d.cp < 0x20 && d.cp != U'\t' && d.cp != U'\n' && d.cp != U'\r' && d.cp != U'\f' &&
        d.cp != U'\v') {
      return i;
    }
    i += d.len;
  }
  return std::nullopt;
}

// Lowercases a UTF-8 string; invalid bytes are copied through.
inline std::string lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto d = detail::decode(s, i);
    if (d.len == 0) {
      out.push_back(s[i]);
      ++i;
      continue;
    }
    detail::append_utf8(out, to_lower(d.cp));
    i += d.len;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\n\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline bool is_blank(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto d = detail::decode(s, i);
    if (d.len == 0) return false;
    if (!is_space(d.cp)) return false;
    i += d.len;
  }
  return true;
}

// Collapses runs of whitespace into one ASCII space and trims both ends.
inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto d = detail::decode(s, i);
    const std::size_t len = d.len == 0 ? 1 : d.len;
    if (d.len != 0 && is_space(d.cp)) {
      pending = !out.empty();
    } else {
      if (pending) out.push_back(' ');
      pending = false;
      out.append(s.substr(i, len));
    }
    i += len;
  }
  return out;
}

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  std::string current;
  bool saw_break = true;
  bool current_after_break = true;

  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back({std::move(current), current_after_break});
      current.clear();
      saw_break = false;
    }
  };

  std::size_t i = 0;
  while (i < s.size()) {
    const auto d = detail::decode(s, i);
    if (d.len == 0) {  // stray byte: treat as punctuation
      flush();
      saw_break = true;
      ++i;
      continue;
    }
    if (is_word_char(d.cp)) {
      if (current.empty()) current_after_break = saw_break;
      detail::append_utf8(current, to_lower(d.cp));
    } else if (is_joiner(d.cp) && !current.empty() && i + d.len < s.size()) {
      const auto next = detail::decode(s, i + d.len);
      if (next.len != 0 && is_word_char(next.cp)) {
        current.push_back(d.cp == U'\'' || d.cp == 0x2019 || d.cp == 0x02BC ? '\'' : '-');
      } else {
        flush();
        saw_break = true;
      }
    } else {
      flush();
      if (!is_space(d.cp)) saw_break = true;
    }
    i += d.len;
  }
  flush();
  return tokens;
}

inline std::vector<std::string> token_strings(std::string_view s) {
  auto tokens = tokenize(s);
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (auto& t : tokens) out.push_back(std::move(t.text));
  return out;
}

inline std::size_t count_tokens(std::string_view s) { return tokenize(s).size(); }

inline bool has_letter(std::string_view token) {
  std::size_t i = 0;
  while (i < token.size()) {
    const auto d = detail::decode(token, i);
    if (d.len == 0) return false;
    if (d.cp >= 0x80 ? is_word_char(d.cp) : (is_upper(d.cp) || is_lower(d.cp))) return true;
    i += d.len;
  }
  return false;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

}  // namespace pfp::text
