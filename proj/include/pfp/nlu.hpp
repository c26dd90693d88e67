#pragma once

// Scored key terms: import from Watson-style NLU JSON, or extract them
// locally with TF-IDF ranking and lexicon-based sentiment/emotion windows.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "pfp/error.hpp"
#include "pfp/io.hpp"
#include "pfp/text.hpp"

namespace pfp::nlu {

enum class Emotion : std::uint8_t { Anger, Disgust, Fear, Joy, Sadness };

inline constexpr std::size_t kEmotionCount = 5;
inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {"anger", "disgust", "fear", "joy",
                                                                              "sadness"};

inline std::optional<Emotion> parse_emotion(std::string_view name) {
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    if (kEmotionNames[i] == name) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

struct Emotions {
  std::array<double, kEmotionCount> scores{};

  double& operator[](Emotion e) { return scores[static_cast<std::size_t>(e)]; }
  double operator[](Emotion e) const { return scores[static_cast<std::size_t>(e)]; }
  bool operator==(const Emotions&) const = default;
};

enum class TermKind { Entity, Keyword };

inline std::string_view to_string(TermKind k) { return k == TermKind::Entity ? "entity" : "keyword"; }

struct KeyTerm {
  std::string surface;
  TermKind kind = TermKind::Keyword;
  double relevance = 0.0;  // [0, 1]
  double sentiment = 0.0;  // [-1, 1]
  Emotions emotions;       // each in [0, 1]
};

// Case-folded identity of a term surface.
inline std::string term_key(std::string_view surface) { return text::lower(text::collapse_whitespace(surface)); }

// Relevance descending, surface ascending on ties.
inline void sort_by_relevance(std::vector<KeyTerm>& terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const KeyTerm& a, const KeyTerm& b) {
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    return a.surface < b.surface;
  });
}

// ---------------------------------------------------------------------------
// Lexicons

// Background corpus frequencies used for the IDF factor:
//   idf(t) = ln((total + 1) / (count(t) + 1)) + 1
// An empty table gives idf = 1 for every token.
struct BackgroundTable {
  double total = 0.0;
  std::unordered_map<std::string, double> counts;

  double idf(const std::string& token) const {
    const auto it = counts.find(token);
    const double c = it == counts.end() ? 0.0 : it->second;
    return std::log((total + 1.0) / (c + 1.0)) + 1.0;
  }
};

struct Lexicons {
  std::unordered_map<std::string, double> sentiment;      // polarity in [-1, 1]
  std::unordered_map<std::string, std::uint8_t> emotion;  // bit i = kEmotionNames[i]
  std::unordered_set<std::string> stopwords;
  BackgroundTable background;
};

namespace detail {

template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    ++line_no;
    auto line = text::trim(content.substr(pos, eol - pos));
    if (!line.empty() && line.front() != '#') fn(line, line_no);
    pos = eol + 1;
  }
}

inline std::pair<std::string_view, std::string_view> split_tab(std::string_view line, std::size_t line_no,
                                                               std::string_view what) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) {
    throw Error(ErrorKind::ParseError, std::string(what) + " line " + std::to_string(line_no) + ": expected a tab");
  }
  return {text::trim(line.substr(0, tab)), text::trim(line.substr(tab + 1))};
}

inline std::string lexicon_token(std::string_view raw, std::size_t line_no, std::string_view what) {
  auto token = text::lower(raw);
  if (token.empty() || token.find_first_of(" \t") != std::string::npos) {
    throw Error(ErrorKind::ParseError,
                std::string(what) + " line " + std::to_string(line_no) + ": entry must be a single token");
  }
  return token;
}

inline double parse_number(std::string_view s, std::size_t line_no, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, std::string(what) + " line " + std::to_string(line_no) + ": bad number '" +
                                           std::string(s) + "'");
  }
}

}  // namespace detail

// `token<TAB>score`, scores clamped to [-1, 1].
inline std::unordered_map<std::string, double> parse_sentiment_lexicon(std::string_view content) {
  std::unordered_map<std::string, double> out;
  detail::for_each_line(content, [&](std::string_view line, std::size_t n) {
    const auto [tok, score] = detail::split_tab(line, n, "sentiment lexicon");
    out[detail::lexicon_token(tok, n, "sentiment lexicon")] =
        std::clamp(detail::parse_number(score, n, "sentiment lexicon"), -1.0, 1.0);
  });
  return out;
}

// `token<TAB>emotion`, one pair per line; a token may repeat.
inline std::unordered_map<std::string, std::uint8_t> parse_emotion_lexicon(std::string_view content) {
  std::unordered_map<std::string, std::uint8_t> out;
  detail::for_each_line(content, [&](std::string_view line, std::size_t n) {
    const auto [tok, name] = detail::split_tab(line, n, "emotion lexicon");
    const auto e = parse_emotion(text::lower(name));
    if (!e) {
      throw Error(ErrorKind::ParseError,
                  "emotion lexicon line " + std::to_string(n) + ": unknown emotion '" + std::string(name) + "'");
    }
    out[detail::lexicon_token(tok, n, "emotion lexicon")] |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(*e));
  });
  return out;
}

inline std::unordered_set<std::string> parse_stopwords(std::string_view content) {
  std::unordered_set<std::string> out;
  detail::for_each_line(content, [&](std::string_view line, std::size_t n) {
    out.insert(detail::lexicon_token(line, n, "stopwords"));
  });
  return out;
}

// `#total<TAB>N` header line, then `token<TAB>count`.
inline BackgroundTable parse_background(std::string_view content) {
  BackgroundTable table;
  std::size_t pos = 0, line_no = 0;
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    ++line_no;
    const auto line = text::trim(content.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    const auto [tok, count] = detail::split_tab(line, line_no, "background table");
    const double c = detail::parse_number(count, line_no, "background table");
    if (tok == "#total") {
      table.total = c;
    } else if (tok.empty() || tok.front() != '#') {
      table.counts[detail::lexicon_token(tok, line_no, "background table")] = c;
    }
  }
  if (table.total <= 0.0) {
    for (const auto& [_, c] : table.counts) table.total += c;
  }
  return table;
}

// A lexicon directory holds any of sentiment.tsv, emotion.tsv, stopwords.txt
// and background.tsv; missing files leave that part empty.
inline Lexicons load_lexicons(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::IoError, "lexicon directory not found: " + dir.string());
  Lexicons lex;
  if (auto p = dir / "sentiment.tsv"; std::filesystem::exists(p)) lex.sentiment = parse_sentiment_lexicon(io::read_file(p));
  if (auto p = dir / "emotion.tsv"; std::filesystem::exists(p)) lex.emotion = parse_emotion_lexicon(io::read_file(p));
  if (auto p = dir / "stopwords.txt"; std::filesystem::exists(p)) lex.stopwords = parse_stopwords(io::read_file(p));
  if (auto p = dir / "background.tsv"; std::filesystem::exists(p)) lex.background = parse_background(io::read_file(p));
  return lex;
}

// ---------------------------------------------------------------------------
// Watson-style import

namespace detail {

inline double number_field(const nlohmann::json& obj, const char* field, const std::string& where) {
  const auto& v = obj.at(field);
  if (!v.is_number()) throw Error(ErrorKind::RangeError, where + "." + field + " is not numeric");
  return v.get<double>();
}

inline KeyTerm parse_nlu_item(const nlohmann::json& item, TermKind kind, const std::string& where) {
  if (!item.is_object()) throw Error(ErrorKind::SchemaError, where + " is not an object");
  if (!item.contains("text")) throw Error(ErrorKind::SchemaError, where + ".text missing");
  if (!item["text"].is_string()) throw Error(ErrorKind::SchemaError, where + ".text is not a string");
  if (!item.contains("relevance")) throw Error(ErrorKind::SchemaError, where + ".relevance missing");

  KeyTerm t;
  t.surface = text::collapse_whitespace(item["text"].get<std::string>());
  if (t.surface.empty()) throw Error(ErrorKind::SchemaError, where + ".text is empty");
  t.kind = kind;
  t.relevance = std::clamp(number_field(item, "relevance", where), 0.0, 1.0);

  if (item.contains("sentiment")) {
    const auto& s = item["sentiment"];
    if (!s.is_object()) throw Error(ErrorKind::SchemaError, where + ".sentiment is not an object");
    if (s.contains("score")) t.sentiment = std::clamp(number_field(s, "score", where + ".sentiment"), -1.0, 1.0);
  }
  if (item.contains("emotion")) {
    const auto& e = item["emotion"];
    if (!e.is_object()) throw Error(ErrorKind::SchemaError, where + ".emotion is not an object");
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
      const std::string name(kEmotionNames[i]);
      if (e.contains(name)) t.emotions.scores[i] = std::clamp(number_field(e, name.c_str(), where + ".emotion"), 0.0, 1.0);
    }
  }
  return t;
}

inline const nlohmann::json& require_array(const nlohmann::json& doc, const char* field) {
  if (!doc.is_object() || !doc.contains(field)) throw Error(ErrorKind::SchemaError, std::string(field) + " missing");
  const auto& arr = doc[field];
  if (!arr.is_array()) throw Error(ErrorKind::SchemaError, std::string(field) + " is not an array");
  return arr;
}

}  // namespace detail

// Union of both lists keyed by case-folded surface. Entities win collisions;
// duplicates within one list keep the more relevant record.
inline std::vector<KeyTerm> import_nlu_json(const nlohmann::json& entities_doc, const nlohmann::json& keywords_doc) {
  std::map<std::string, KeyTerm> merged;
  auto add_list = [&](const nlohmann::json& arr, TermKind kind, const char* field) {
    std::size_t i = 0;
    for (const auto& item : arr) {
      auto term = detail::parse_nlu_item(item, kind, std::string(field) + "[" + std::to_string(i++) + "]");
      auto key = term_key(term.surface);
      auto it = merged.find(key);
      if (it == merged.end()) {
        merged.emplace(std::move(key), std::move(term));
      } else if (it->second.kind == kind && term.relevance > it->second.relevance) {
        it->second = std::move(term);
      }
    }
  };
  add_list(detail::require_array(entities_doc, "entities"), TermKind::Entity, "entities");
  add_list(detail::require_array(keywords_doc, "keywords"), TermKind::Keyword, "keywords");

  std::vector<KeyTerm> out;
  out.reserve(merged.size());
  for (auto& [_, t] : merged) out.push_back(std::move(t));
  sort_by_relevance(out);
  return out;
}

// ---------------------------------------------------------------------------
// Built-in extractor

struct ExtractParams {
  std::size_t max_terms = 50;
  std::size_t ngram_max = 2;
  std::size_t window = 10;
  // Multiword candidates must occur at least this often.
  std::size_t min_ngram_count = 2;
};

// Ranks stopword-free n-grams (no punctuation inside, no word repeated back to
// back) by tf * sum(idf of component tokens), then
// max-normalizes. A term's sentiment is the mean polarity of the lexicon hits
// found within `window` tokens of its occurrences (the term's own tokens
// included); each emotion is m / (m + 1) where m is the mean number of
// matching lexicon hits per occurrence.
inline std::vector<KeyTerm> extract_keyterms(std::string_view document, const Lexicons& lex,
                                             const ExtractParams& params = {}) {
  if (params.ngram_max < 1) throw Error(ErrorKind::InvalidArgument, "ngram_max must be >= 1");
  const auto tokens = text::tokenize(document);
  if (tokens.empty()) throw Error(ErrorKind::EmptyDocument, "document has no tokens");

  const std::size_t n_tokens = tokens.size();
  std::vector<char> eligible(n_tokens);
  for (std::size_t i = 0; i < n_tokens; ++i) {
    eligible[i] = text::has_letter(tokens[i].text) && !lex.stopwords.contains(tokens[i].text);
  }

  struct Candidate {
    std::size_t length = 0;
    std::vector<std::size_t> starts;
  };
  std::map<std::string, Candidate> candidates;
  for (std::size_t i = 0; i < n_tokens; ++i) {
    std::string surface;
    for (std::size_t n = 1; n <= params.ngram_max && i + n <= n_tokens; ++n) {
      const std::size_t j = i + n - 1;
      if (!eligible[j] || (n > 1 && (tokens[j].after_break || tokens[j].text == tokens[j - 1].text))) break;
      if (n > 1) surface += ' ';
      surface += tokens[j].text;
      auto& c = candidates[surface];
      c.length = n;
      c.starts.push_back(i);
    }
  }

  struct Scored {
    const std::string* surface;
    const Candidate* cand;
    double raw;
  };
  std::vector<Scored> scored;
  for (const auto& [surface, cand] : candidates) {
    if (cand.length > 1 && cand.starts.size() < params.min_ngram_count) continue;
    double idf_sum = 0.0;
    const std::size_t s0 = cand.starts.front();
    for (std::size_t k = 0; k < cand.length; ++k) idf_sum += lex.background.idf(tokens[s0 + k].text);
    scored.push_back({&surface, &cand, static_cast<double>(cand.starts.size()) * idf_sum});
  }
  if (scored.empty()) return {};

  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.raw != b.raw) return a.raw > b.raw;
    return *a.surface < *b.surface;
  });
  const double max_raw = scored.front().raw;
  if (scored.size() > params.max_terms) scored.resize(params.max_terms);

  std::vector<KeyTerm> out;
  out.reserve(scored.size());
  for (const auto& s : scored) {
    KeyTerm t;
    t.surface = *s.surface;
    t.kind = TermKind::Keyword;
    t.relevance = max_raw > 0.0 ? s.raw / max_raw : 0.0;

    double polarity_sum = 0.0;
    std::size_t polarity_hits = 0;
    std::array<double, kEmotionCount> emotion_hits{};
    for (const std::size_t start : s.cand->starts) {
      const std::size_t lo = start >= params.window ? start - params.window : 0;
      const std::size_t hi = std::min(n_tokens - 1, start + s.cand->length - 1 + params.window);
      for (std::size_t p = lo; p <= hi; ++p) {
        const auto& tok = tokens[p].text;
        if (auto it = lex.sentiment.find(tok); it != lex.sentiment.end()) {
          polarity_sum += it->second;
          ++polarity_hits;
        }
        if (auto it = lex.emotion.find(tok); it != lex.emotion.end()) {
          for (std::size_t e = 0; e < kEmotionCount; ++e) {
            if (it->second & (1u << e)) emotion_hits[e] += 1.0;
          }
        }
      }
    }
    if (polarity_hits > 0) t.sentiment = std::clamp(polarity_sum / static_cast<double>(polarity_hits), -1.0, 1.0);
    const double occurrences = static_cast<double>(s.cand->starts.size());
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      const double mean = emotion_hits[e] / occurrences;
      t.emotions.scores[e] = mean / (mean + 1.0);
    }
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Key-term JSON documents: {"source": ..., "terms": [KeyTerm...]}

inline nlohmann::ordered_json emotions_to_json(const Emotions& e) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < kEmotionCount; ++i) j[std::string(kEmotionNames[i])] = e.scores[i];
  return j;
}

inline nlohmann::ordered_json keyterm_to_json(const KeyTerm& t) {
  nlohmann::ordered_json j;
  j["surface"] = t.surface;
  j["kind"] = to_string(t.kind);
  j["relevance"] = t.relevance;
  j["sentiment"] = t.sentiment;
  j["emotions"] = emotions_to_json(t.emotions);
  return j;
}

inline nlohmann::ordered_json keyterms_to_json(std::string_view source, const std::vector<KeyTerm>& terms) {
  nlohmann::ordered_json j;
  j["source"] = source;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : terms) j["terms"].push_back(keyterm_to_json(t));
  return j;
}

template <typename Json>
KeyTerm keyterm_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::SchemaError, where + " is not an object");
  for (const char* f : {"surface", "kind", "relevance", "sentiment", "emotions"}) {
    if (!j.contains(f)) throw Error(ErrorKind::SchemaError, where + "." + f + " missing");
  }
  KeyTerm t;
  if (!j["surface"].is_string() || !j["kind"].is_string()) {
    throw Error(ErrorKind::SchemaError, where + ": surface/kind must be strings");
  }
  t.surface = j["surface"].template get<std::string>();
  if (text::trim(t.surface).empty()) throw Error(ErrorKind::SchemaError, where + ".surface is empty");
  const auto kind = j["kind"].template get<std::string>();
  if (kind == "entity") {
    t.kind = TermKind::Entity;
  } else if (kind == "keyword") {
    t.kind = TermKind::Keyword;
  } else {
    throw Error(ErrorKind::SchemaError, where + ".kind must be entity or keyword");
  }
  auto num = [&](const Json& v, const std::string& name) {
    if (!v.is_number()) throw Error(ErrorKind::RangeError, where + "." + name + " is not numeric");
    return v.template get<double>();
  };
  t.relevance = std::clamp(num(j["relevance"], "relevance"), 0.0, 1.0);
  t.sentiment = std::clamp(num(j["sentiment"], "sentiment"), -1.0, 1.0);
  const auto& em = j["emotions"];
  if (!em.is_object()) throw Error(ErrorKind::SchemaError, where + ".emotions is not an object");
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    const std::string name(kEmotionNames[i]);
    if (!em.contains(name)) throw Error(ErrorKind::SchemaError, where + ".emotions." + name + " missing");
    t.emotions.scores[i] = std::clamp(num(em[name], "emotions." + name), 0.0, 1.0);
  }
  return t;
}

struct KeyTermDocument {
  std::string source;
  std::vector<KeyTerm> terms;
};

inline KeyTermDocument keyterms_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("source") || !j["source"].is_string()) {
    throw Error(ErrorKind::SchemaError, "source missing");
  }
  if (!j.contains("terms") || !j["terms"].is_array()) throw Error(ErrorKind::SchemaError, "terms missing");
  KeyTermDocument doc;
  doc.source = j["source"].get<std::string>();
  std::size_t i = 0;
  for (const auto& item : j["terms"]) doc.terms.push_back(keyterm_from_json(item, "terms[" + std::to_string(i++) + "]"));
  return doc;
}

}  // namespace pfp::nlu
