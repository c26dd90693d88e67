#pragma once

// Analysis artifacts: TensorBoard projector TSV pairs, word-cloud JSON and
// PCA coordinates. All float output uses the shortest round-trip decimal, so
// repeated runs on identical input are byte-identical.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pfp/footprint.hpp"
#include "pfp/format.hpp"
#include "pfp/io.hpp"
#include "pfp/nlu.hpp"
#include "pfp/vsm.hpp"

namespace pfp::exporting {

enum class SentimentBucket { Negative, Neutral, Positive };

inline std::string_view to_string(SentimentBucket b) {
  switch (b) {
    case SentimentBucket::Negative: return "negative";
    case SentimentBucket::Neutral: return "neutral";
    case SentimentBucket::Positive: return "positive";
  }
  return "neutral";
}

struct CloudOptions {
  double negative_threshold = -0.15;  // sentiment <= this is negative
  double positive_threshold = 0.15;   // sentiment >= this is positive
  double emotion_threshold = 0.5;     // dominant emotion needs at least this
};

inline SentimentBucket sentiment_bucket(double sentiment, const CloudOptions& opt = {}) {
  if (sentiment >= opt.positive_threshold) return SentimentBucket::Positive;
  if (sentiment <= opt.negative_threshold) return SentimentBucket::Negative;
  return SentimentBucket::Neutral;
}

// Strongest emotion if it reaches the threshold; the first in canonical order
// wins ties.
inline std::optional<nlu::Emotion> dominant_emotion(const nlu::Emotions& e, const CloudOptions& opt = {}) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < nlu::kEmotionCount; ++i) {
    if (e.scores[i] > e.scores[best]) best = i;
  }
  if (e.scores[best] < opt.emotion_threshold) return std::nullopt;
  return static_cast<nlu::Emotion>(best);
}

inline std::string emotion_label(const std::optional<nlu::Emotion>& e) {
  return e ? std::string(nlu::kEmotionNames[static_cast<std::size_t>(*e)]) : "none";
}

// Tab, newline and carriage return each become one space.
inline std::string escape_tsv_field(std::string_view s) {
  std::string out(s);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

// ---------------------------------------------------------------------------
// Projector files

inline constexpr std::string_view kMetadataHeader = "surface\trelevance\tsentiment\tdominant_emotion\tsynthetic";

inline std::string projector_vectors_tsv(const footprint::Footprint& fp) {
  std::string out;
  for (const auto& t : fp.terms) {
    bool first = true;
    for (const float x : t.vector()) {
      if (!first) out += '\t';
      first = false;
      out += format::shortest(x);
    }
    out += '\n';
  }
  return out;
}

inline std::string projector_metadata_tsv(const footprint::Footprint& fp, const CloudOptions& opt = {}) {
  std::string out(kMetadataHeader);
  out += '\n';
  for (const auto& t : fp.terms) {
    out += escape_tsv_field(t.surface());
    out += '\t';
    out += format::shortest(t.key.relevance);
    out += '\t';
    out += format::shortest(t.key.sentiment);
    out += '\t';
    out += emotion_label(dominant_emotion(t.key.emotions, opt));
    out += '\t';
    out += t.embedded.synthetic ? "true" : "false";
    out += '\n';
  }
  return out;
}

struct ProjectorFiles {
  std::filesystem::path vectors;
  std::filesystem::path metadata;
};

inline ProjectorFiles write_projector(const footprint::Footprint& fp, const std::filesystem::path& out_dir,
                                      const CloudOptions& opt = {}) {
  if (fp.terms.empty()) throw Error(ErrorKind::EmptyInput, "footprint has no terms");
  ProjectorFiles files{out_dir / "vectors.tsv", out_dir / "metadata.tsv"};
  io::write_file(files.vectors, projector_vectors_tsv(fp));
  io::write_file(files.metadata, projector_metadata_tsv(fp, opt));
  return files;
}

// Reads a vectors.tsv back (one row per line, tab-separated floats).
inline std::vector<vsm::Vector> parse_projector_vectors(std::string_view content) {
  std::vector<vsm::Vector> rows;
  std::size_t pos = 0, line_no = 0;
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    ++line_no;
    const auto line = content.substr(pos, eol - pos);
    pos = eol + 1;
    vsm::Vector row;
    std::size_t f = 0;
    while (f <= line.size()) {
      auto tab = line.find('\t', f);
      if (tab == std::string_view::npos) tab = line.size();
      const auto field = line.substr(f, tab - f);
      float v = 0.0f;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw Error(ErrorKind::ParseError, "vectors.tsv line " + std::to_string(line_no));
      }
      row.push_back(v);
      f = tab + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Word cloud

struct WordCloudEntry {
  std::string text;
  double size = 0.0;  // relevance
  SentimentBucket sentiment_bucket = SentimentBucket::Neutral;
  std::optional<nlu::Emotion> dominant_emotion;
  std::size_t cluster_id = 0;
  double similarity = 0.0;  // to the cluster seed; 1 for the seed itself
  bool seed = false;
  bool synthetic = false;
};

// Entries ordered by cluster, the seed first, then members by similarity.
inline std::vector<WordCloudEntry> wordcloud_entries(const std::vector<footprint::ThemeCluster>& clusters,
                                                     const CloudOptions& opt = {}) {
  std::vector<WordCloudEntry> out;
  auto make = [&](const footprint::FootprintTerm& t, std::size_t cid, double sim, bool seed) {
    return WordCloudEntry{t.surface(),
                          t.key.relevance,
                          sentiment_bucket(t.key.sentiment, opt),
                          dominant_emotion(t.key.emotions, opt),
                          cid,
                          sim,
                          seed,
                          t.embedded.synthetic};
  };
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    out.push_back(make(clusters[c].seed, c, 1.0, true));
    auto members = clusters[c].members;
    std::stable_sort(members.begin(), members.end(),
                     [](const auto& a, const auto& b) { return a.similarity > b.similarity; });
    for (const auto& m : members) out.push_back(make(m.term, c, m.similarity, false));
  }
  return out;
}

inline nlohmann::ordered_json wordcloud_to_json(const std::vector<footprint::ThemeCluster>& clusters,
                                                const CloudOptions& opt = {}) {
  nlohmann::ordered_json j;
  j["thresholds"] = {{"negative", opt.negative_threshold},
                     {"positive", opt.positive_threshold},
                     {"emotion", opt.emotion_threshold}};
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : wordcloud_entries(clusters, opt)) {
    nlohmann::ordered_json ej;
    ej["text"] = e.text;
    ej["size"] = e.size;
    ej["sentiment_bucket"] = to_string(e.sentiment_bucket);
    ej["dominant_emotion"] = emotion_label(e.dominant_emotion);
    ej["cluster_id"] = e.cluster_id;
    ej["similarity"] = e.similarity;
    ej["seed"] = e.seed;
    ej["synthetic"] = e.synthetic;
    j["entries"].push_back(std::move(ej));
  }
  return j;
}

inline void write_wordcloud(const std::vector<footprint::ThemeCluster>& clusters, const std::filesystem::path& out,
                            const CloudOptions& opt = {}) {
  io::write_file(out, wordcloud_to_json(clusters, opt).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// PCA coordinates

inline vsm::Projection project_footprint(const footprint::Footprint& fp) {
  std::vector<vsm::VectorView> views;
  for (const auto& t : fp.terms) views.push_back(t.vector());
  return vsm::pca_2d(std::span<const vsm::VectorView>(views));
}

inline std::string pca_tsv(const footprint::Footprint& fp, const vsm::Projection& p) {
  std::string out = "surface\tx\ty\n";
  for (std::size_t i = 0; i < fp.terms.size(); ++i) {
    out += escape_tsv_field(fp.terms[i].surface());
    out += '\t';
    out += format::shortest(p.points[i].x);
    out += '\t';
    out += format::shortest(p.points[i].y);
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json projection_to_json(const footprint::Footprint& fp, const vsm::Projection& p,
                                                 const CloudOptions& opt = {}) {
  nlohmann::ordered_json j;
  j["source"] = fp.source;
  j["explained_variance"] = {p.variance1, p.variance2};
  j["points"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < fp.terms.size(); ++i) {
    const auto& t = fp.terms[i];
    nlohmann::ordered_json pj;
    pj["surface"] = t.surface();
    pj["x"] = p.points[i].x;
    pj["y"] = p.points[i].y;
    pj["relevance"] = t.key.relevance;
    pj["sentiment"] = t.key.sentiment;
    pj["sentiment_bucket"] = to_string(sentiment_bucket(t.key.sentiment, opt));
    pj["dominant_emotion"] = emotion_label(dominant_emotion(t.key.emotions, opt));
    pj["synthetic"] = t.embedded.synthetic;
    j["points"].push_back(std::move(pj));
  }
  return j;
}

}  // namespace pfp::exporting
