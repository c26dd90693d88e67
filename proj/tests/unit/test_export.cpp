#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "pfp/export.hpp"

using namespace pfp;
using footprint::Footprint;
using footprint::FootprintTerm;

namespace {

FootprintTerm term(const std::string& surface, double relevance, vsm::Vector v, double sentiment = 0.0) {
  FootprintTerm t;
  t.key.surface = surface;
  t.key.relevance = relevance;
  t.key.sentiment = sentiment;
  t.embedded.surface = surface;
  t.embedded.vector = std::move(v);
  t.embedded.parts = {surface};
  return t;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pfp_export_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Projector, TwoByThree) {
  Footprint fp{"smith", "s", {term("trade", 0.9, {1, 0.5f, -2}), term("jobs", 0.4, {0.25f, 3, 0})}};
  const auto dir = scratch("two");
  const auto files = exporting::write_projector(fp, dir);
  EXPECT_EQ(io::read_file(files.vectors), "1\t0.5\t-2\n0.25\t3\t0\n");
  EXPECT_EQ(io::read_file(files.metadata),
            "surface\trelevance\tsentiment\tdominant_emotion\tsynthetic\n"
            "trade\t0.9\t0\tnone\tfalse\n"
            "jobs\t0.4\t0\tnone\tfalse\n");
  std::filesystem::remove_all(dir);
}

TEST(Projector, EscapesSeparators) {
  Footprint fp{"x", "s", {term("a\tb\nc", 1.0, {1})}};
  const auto meta = exporting::projector_metadata_tsv(fp);
  EXPECT_NE(meta.find("\na b c\t1\t"), std::string::npos);
  // Header plus one row.
  EXPECT_EQ(std::count(meta.begin(), meta.end(), '\n'), 2);
}

TEST(Projector, EmptyFootprintRejected) {
  EXPECT_THROW(exporting::write_projector(Footprint{}, scratch("empty")), Error);
}

TEST(Projector, FloatsRoundTripExactly) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<float> u(-100, 100);
  Footprint fp{"x", "s", {}};
  for (int i = 0; i < 40; ++i) {
    vsm::Vector v(25);
    for (auto& x : v) x = u(rng);
    fp.terms.push_back(term("t" + std::to_string(i), 0.5, v));
  }
  fp.terms[0].embedded.vector[0] = 1.17549435e-38f;
  fp.terms[0].embedded.vector[1] = 3.4028235e38f;
  fp.terms[0].embedded.vector[2] = 1e-45f;
  const auto rows = exporting::parse_projector_vectors(exporting::projector_vectors_tsv(fp));
  ASSERT_EQ(rows.size(), fp.terms.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i], fp.terms[i].embedded.vector);
}

TEST(Projector, MetadataLinesMatchVectors) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Footprint fp{"x", "s", {}};
    const auto n = 1 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) fp.terms.push_back(term("w " + std::to_string(i), 0.1, {1, 2}));
    const auto vec = exporting::projector_vectors_tsv(fp);
    const auto meta = exporting::projector_metadata_tsv(fp);
    ASSERT_EQ(std::count(vec.begin(), vec.end(), '\n') + 1, std::count(meta.begin(), meta.end(), '\n'));
  }
}

TEST(WordCloud, Buckets) {
  EXPECT_EQ(exporting::sentiment_bucket(0.0), exporting::SentimentBucket::Neutral);
  EXPECT_EQ(exporting::sentiment_bucket(0.6), exporting::SentimentBucket::Positive);
  EXPECT_EQ(exporting::sentiment_bucket(-0.6), exporting::SentimentBucket::Negative);
  EXPECT_EQ(exporting::sentiment_bucket(0.15), exporting::SentimentBucket::Positive);
  EXPECT_EQ(exporting::sentiment_bucket(-0.15), exporting::SentimentBucket::Negative);
  exporting::CloudOptions wide{-0.7, 0.7, 0.5};
  EXPECT_EQ(exporting::sentiment_bucket(0.6, wide), exporting::SentimentBucket::Neutral);
}

TEST(WordCloud, DominantEmotion) {
  nlu::Emotions e;
  EXPECT_EQ(exporting::emotion_label(exporting::dominant_emotion(e)), "none");
  e[nlu::Emotion::Fear] = 0.4;
  EXPECT_EQ(exporting::emotion_label(exporting::dominant_emotion(e)), "none");
  e[nlu::Emotion::Joy] = 0.8;
  EXPECT_EQ(exporting::emotion_label(exporting::dominant_emotion(e)), "joy");
  // Ties go to the earlier emotion.
  e[nlu::Emotion::Anger] = 0.8;
  EXPECT_EQ(exporting::emotion_label(exporting::dominant_emotion(e)), "anger");
}

TEST(WordCloud, OrderingAndFields) {
  Footprint fp{"x",
               "s",
               {term("a", 1.0, {1, 0, 0}, 0.6), term("b", 0.9, {1, 1, 0}), term("c", 0.8, {0, 1, 0}),
                term("d", 0.7, {1, 1, 1}, -0.4)}};
  fp.terms[1].key.emotions[nlu::Emotion::Sadness] = 0.75;
  // Seed b: d at 2/sqrt(6), then a and c tie at 1/sqrt(2) and a wins on name.
  const auto clusters = footprint::theme_clusters(fp, 2, 2);
  const auto j = exporting::wordcloud_to_json(clusters);
  const auto& entries = j["entries"];
  ASSERT_EQ(entries.size(), 6u);
  std::vector<std::string> texts;
  for (const auto& e : entries) texts.push_back(e["text"]);
  EXPECT_EQ(texts, (std::vector<std::string>{"a", "b", "d", "b", "d", "a"}));
  EXPECT_EQ(entries[0]["seed"], true);
  EXPECT_EQ(entries[0]["similarity"], 1.0);
  EXPECT_EQ(entries[0]["sentiment_bucket"], "positive");
  EXPECT_EQ(entries[1]["dominant_emotion"], "sadness");
  EXPECT_EQ(entries[3]["cluster_id"], 1);
  EXPECT_EQ(entries[4]["sentiment_bucket"], "negative");
  EXPECT_EQ(entries[5]["sentiment_bucket"], "positive");
  EXPECT_EQ(entries[2]["dominant_emotion"], "none");
  EXPECT_EQ(j["thresholds"]["positive"], 0.15);

  const auto dir = scratch("cloud");
  exporting::write_wordcloud(clusters, dir / "wordcloud.json");
  EXPECT_EQ(nlohmann::ordered_json::parse(io::read_file(dir / "wordcloud.json")), j);
  std::filesystem::remove_all(dir);
}

TEST(Pca, TsvMatchesProjection) {
  Footprint fp{"x", "s", {term("a", 1, {2, 0, 0}), term("b", 1, {-2, 0, 0}), term("c\td", 1, {0, 1, 0}),
                          term("e", 1, {0, -1, 0})}};
  const auto p = exporting::project_footprint(fp);
  const auto tsv = exporting::pca_tsv(fp, p);
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "surface\tx\ty");
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 5);
  EXPECT_NE(tsv.find("\nc d\t"), std::string::npos);
  // The first axis carries the larger spread.
  EXPECT_NEAR(std::abs(p.points[0].x), 2.0, 1e-9);
  EXPECT_NEAR(std::abs(p.points[2].y), 1.0, 1e-9);
  const auto j = exporting::projection_to_json(fp, p);
  EXPECT_EQ(j["points"].size(), 4u);
  EXPECT_GT(j["explained_variance"][0].get<double>(), j["explained_variance"][1].get<double>());
}
