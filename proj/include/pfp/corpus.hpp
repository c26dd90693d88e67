#pragma once

// Transcript ingestion: speaker segmentation, removal of audience cues and
// other stage directions, and per-speaker document assembly.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pfp/error.hpp"
#include "pfp/text.hpp"

namespace pfp::corpus {

struct Utterance {
  std::string speaker;
  std::size_t index = 0;
  std::string text;

  bool operator==(const Utterance&) const = default;
};

struct SpeakerDocument {
  std::string speaker;
  std::string text;
  std::size_t token_count = 0;
};

inline constexpr std::string_view kDefaultLabelPattern =
    R"(^[ \t]*([A-Z][A-Z.'\-]*(?:[ \t]+[A-Z][A-Z.'\-]*){0,3})[ \t]*:(.*)$)";
inline constexpr std::string_view kDocumentSpeaker = "DOCUMENT";

struct TranscriptFormat {
  enum class Kind { SpeakerLabels, SingleDocument };

  Kind kind = Kind::SpeakerLabels;
  // Group 1 captures the raw label, group 2 the rest of the line.
  std::string label_pattern{kDefaultLabelPattern};
  std::string document_speaker{kDocumentSpeaker};

  static TranscriptFormat labels() { return {}; }
  static TranscriptFormat document() {
    TranscriptFormat f;
    f.kind = Kind::SingleDocument;
    return f;
  }
};

namespace detail {

inline const std::unordered_set<std::string>& speaker_titles() {
  static const std::unordered_set<std::string> titles = {
      "MR", "MRS", "MS", "DR", "SEN", "SENATOR", "GOV", "GOVERNOR",
      "REP", "REPRESENTATIVE", "SECRETARY", "PROF", "AMB", "AMBASSADOR",
  };
  return titles;
}

inline std::string to_upper(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto d = text::detail::decode(s, i);
    if (d.len == 0) {
      out.push_back(s[i++]);
      continue;
    }
    char32_t cp = d.cp;
    if (text::is_lower(cp) && cp != 0xDF && cp != 0xFF) cp -= 32;
    text::detail::append_utf8(out, cp);
    i += d.len;
  }
  return out;
}

}  // namespace detail

// Uppercase, collapse whitespace, drop leading honorifics ("SEN. MCCAIN" and
// "Senator McCain" both become "MCCAIN").
inline std::string normalize_speaker(std::string_view raw) {
  const std::string collapsed = text::collapse_whitespace(detail::to_upper(raw));
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= collapsed.size()) {
    const auto end = collapsed.find(' ', start);
    const auto word = collapsed.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!word.empty()) words.push_back(word);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  std::size_t first = 0;
  while (words.size() - first > 1) {
    std::string bare = words[first];
    while (!bare.empty() && bare.back() == '.') bare.pop_back();
    if (!detail::speaker_titles().contains(bare)) break;
    ++first;
  }
  std::vector<std::string> kept(words.begin() + static_cast<std::ptrdiff_t>(first), words.end());
  return text::join(kept, " ");
}

inline std::vector<Utterance> parse_transcript(std::string_view raw, const TranscriptFormat& format = {}) {
  if (auto bad = text::find_invalid_text(raw)) {
    throw Error(ErrorKind::MalformedInput, "non-text byte at offset " + std::to_string(*bad));
  }
  if (raw.starts_with("\xEF\xBB\xBF")) raw.remove_prefix(3);

  std::vector<Utterance> out;
  if (format.kind == TranscriptFormat::Kind::SingleDocument) {
    const auto body = text::trim(raw);
    if (body.empty()) throw Error(ErrorKind::NoSpeakersFound, "document is empty");
    out.push_back({normalize_speaker(format.document_speaker), 0, std::string(body)});
    return out;
  }

  const std::regex label(format.label_pattern);
  std::string current;
  bool open = false;
  auto close = [&] {
    if (open) out.back().text = std::string(text::trim(current));
    current.clear();
  };

  std::size_t pos = 0;
  while (pos <= raw.size()) {
    auto eol = raw.find('\n', pos);
    if (eol == std::string_view::npos) eol = raw.size();
    std::string line(raw.substr(pos, eol - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::smatch m;
    std::string speaker;
    if (std::regex_match(line, m, label) && m.size() >= 3) speaker = normalize_speaker(m[1].str());
    if (!speaker.empty()) {
      close();
      out.push_back({speaker, out.size(), {}});
      open = true;
      current = m[2].str();
    } else if (open) {
      current += '\n';
      current += line;
    }
    if (eol == raw.size()) break;
    pos = eol + 1;
  }
  close();
  if (out.empty()) throw Error(ErrorKind::NoSpeakersFound, "no speaker label matched");
  return out;
}

// A stage-direction pattern is either the built-in audience-cue matcher or a
// user regex. The built-in form matches a parenthesized or bracketed span of
// at most four tokens in which uppercase letters outnumber lowercase ones.
class StagePattern {
 public:
  static StagePattern audience_cue() { return StagePattern(CueMatcher{}); }
  static StagePattern regex(const std::string& pattern) {
    return StagePattern(RegexMatcher{std::regex(pattern), pattern});
  }

  // Non-overlapping [begin, end) byte ranges, in order.
  std::vector<std::pair<std::size_t, std::size_t>> find(std::string_view s) const {
    return std::visit([&](const auto& m) { return m.find(s); }, matcher_);
  }

  std::string describe() const {
    if (const auto* r = std::get_if<RegexMatcher>(&matcher_)) return r->source;
    return "<audience-cue>";
  }

 private:
  struct CueMatcher {
    static bool qualifies(std::string_view inner) {
      const auto tokens = text::count_tokens(inner);
      if (tokens == 0 || tokens > 4) return false;
      std::size_t upper = 0, lower = 0, i = 0;
      while (i < inner.size()) {
        const auto d = text::detail::decode(inner, i);
        if (d.len == 0) return false;
        if (text::is_upper(d.cp)) ++upper;
        if (text::is_lower(d.cp)) ++lower;
        i += d.len;
      }
      return upper > lower;
    }

    std::vector<std::pair<std::size_t, std::size_t>> find(std::string_view s) const {
      std::vector<std::pair<std::size_t, std::size_t>> hits;
      std::size_t i = 0;
      while (i < s.size()) {
        const char c = s[i];
        if (c != '(' && c != '[') {
          ++i;
          continue;
        }
        const char closer = c == '(' ? ')' : ']';
        const auto end = s.find_first_of("()[]", i + 1);
        if (end != std::string_view::npos && s[end] == closer && qualifies(s.substr(i + 1, end - i - 1))) {
          hits.emplace_back(i, end + 1);
          i = end + 1;
        } else {
          ++i;
        }
      }
      return hits;
    }
  };

  struct RegexMatcher {
    std::regex re;
    std::string source;

    std::vector<std::pair<std::size_t, std::size_t>> find(std::string_view s) const {
      std::vector<std::pair<std::size_t, std::size_t>> hits;
      for (auto it = std::cregex_iterator(s.data(), s.data() + s.size(), re); it != std::cregex_iterator(); ++it) {
        if (it->length() == 0) continue;
        const auto b = static_cast<std::size_t>(it->position());
        hits.emplace_back(b, b + static_cast<std::size_t>(it->length()));
      }
      return hits;
    }
  };

  using Matcher = std::variant<CueMatcher, RegexMatcher>;
  explicit StagePattern(Matcher m) : matcher_(std::move(m)) {}

  Matcher matcher_;
};

inline std::vector<StagePattern> default_stage_patterns() { return {StagePattern::audience_cue()}; }

// Removes every match of every pattern. Removal repeats until no pattern
// matches, so the output never contains a match (nested cues included).
inline std::string strip_stage_directions(std::string_view s, const std::vector<StagePattern>& patterns,
                                          std::size_t* removed = nullptr) {
  std::string out(s);
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    for (const auto& p : patterns) {
      const auto hits = p.find(out);
      if (hits.empty()) continue;
      std::string next;
      next.reserve(out.size());
      std::size_t cursor = 0;
      for (const auto& [b, e] : hits) {
        next.append(out, cursor, b - cursor);
        cursor = e;
      }
      next.append(out, cursor, std::string::npos);
      out = std::move(next);
      if (removed) *removed += hits.size();
      changed = true;
    }
    if (!changed) break;
  }
  return out;
}

inline std::vector<Utterance> filter_stage_directions(const std::vector<Utterance>& utterances,
                                                      const std::vector<StagePattern>& patterns,
                                                      std::size_t* removed = nullptr) {
  std::vector<Utterance> out;
  out.reserve(utterances.size());
  for (const auto& u : utterances) {
    auto cleaned = strip_stage_directions(u.text, patterns, removed);
    if (text::is_blank(cleaned)) continue;
    out.push_back({u.speaker, u.index, std::move(cleaned)});
  }
  return out;
}

inline std::size_t token_count(const SpeakerDocument& doc) { return text::count_tokens(doc.text); }

// One document per retained speaker, in order of first appearance.
// Whitespace-only utterances contribute nothing.
inline std::vector<SpeakerDocument> split_by_speaker(const std::vector<Utterance>& utterances,
                                                     const std::vector<std::string>& exclude = {}) {
  std::unordered_set<std::string> excluded;
  for (const auto& e : exclude) excluded.insert(normalize_speaker(e));

  std::vector<SpeakerDocument> docs;
  for (const auto& u : utterances) {
    if (excluded.contains(u.speaker)) continue;
    auto it = std::find_if(docs.begin(), docs.end(), [&](const auto& d) { return d.speaker == u.speaker; });
    if (it == docs.end()) {
      docs.push_back({u.speaker, {}, 0});
      it = docs.end() - 1;
    }
    if (text::is_blank(u.text)) continue;
    if (!it->text.empty()) it->text += '\n';
    it->text += u.text;
  }
  if (docs.empty()) throw Error(ErrorKind::AllSpeakersExcluded, "no speaker left after exclusion");
  for (auto& d : docs) d.token_count = token_count(d);
  return docs;
}

struct CorpusConfig {
  TranscriptFormat format;
  std::vector<std::string> moderators;
  std::vector<StagePattern> stage_patterns = default_stage_patterns();
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    if (end == std::string_view::npos) end = s.size();
    auto item = text::trim(s.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

}  // namespace detail

// INI layout:
//
//   [transcript]
//   format = labels            ; or "document" for treaty-style texts
//   label_pattern = ...        ; optional regex, group 1 = label, group 2 = rest
//   document_speaker = DOCUMENT
//   moderators = HOLT, RADDATZ
//
//   [stage_directions]
//   keep_default = true        ; keep the built-in cue matcher
//   pattern1 = \(inaudible\)   ; any key starting with "pattern" is a regex
inline CorpusConfig parse_corpus_config(const std::string& ini_text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(ini_text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::ParseError, std::string("corpus config: ") + e.what());
  }

  CorpusConfig cfg;
  const auto format = tree.get<std::string>("transcript.format", "labels");
  if (format == "document") {
    cfg.format = TranscriptFormat::document();
  } else if (format != "labels") {
    throw Error(ErrorKind::ParseError, "corpus config: unknown format '" + format + "'");
  }
  if (auto p = tree.get_optional<std::string>("transcript.label_pattern")) cfg.format.label_pattern = *p;
  if (auto s = tree.get_optional<std::string>("transcript.document_speaker")) cfg.format.document_speaker = *s;
  cfg.moderators = detail::split_list(tree.get<std::string>("transcript.moderators", ""));

  if (auto section = tree.get_child_optional("stage_directions")) {
    std::vector<std::pair<std::string, std::string>> custom;
    for (const auto& [key, node] : *section) {
      if (key.starts_with("pattern")) custom.emplace_back(key, node.get_value<std::string>());
    }
    std::sort(custom.begin(), custom.end());
    const bool keep_default = section->get<bool>("keep_default", custom.empty());
    cfg.stage_patterns.clear();
    if (keep_default) cfg.stage_patterns.push_back(StagePattern::audience_cue());
    try {
      for (const auto& [key, re] : custom) cfg.stage_patterns.push_back(StagePattern::regex(re));
    } catch (const std::regex_error& e) {
      throw Error(ErrorKind::ParseError, std::string("corpus config: bad pattern: ") + e.what());
    }
  }
  return cfg;
}

// Filesystem-safe name for a speaker id.
inline std::string speaker_file_stem(std::string_view speaker) {
  std::string out;
  for (const char c : speaker) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || u >= 0x80) {
      out.push_back(c);
    } else if (c == ' ' || c == '.' || c == '_') {
      if (!out.empty() && out.back() != '_') out.push_back('_');
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "SPEAKER" : out;
}

}  // namespace pfp::corpus
