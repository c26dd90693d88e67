#pragma once

// The `footprint` command-line tool. Exit codes: 0 success, 1 usage error,
// 2 data error.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pfp/corpus.hpp"
#include "pfp/error.hpp"
#include "pfp/export.hpp"
#include "pfp/footprint.hpp"
#include "pfp/io.hpp"
#include "pfp/nlu.hpp"
#include "pfp/server.hpp"
#include "pfp/vsm.hpp"

#ifndef PFP_DEFAULT_DATA_DIR
#define PFP_DEFAULT_DATA_DIR "data"
#endif

namespace pfp::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

namespace detail {

inline nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

inline void emit(const std::string& out_path, const nlohmann::ordered_json& j, std::ostream& out) {
  const auto text = j.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    io::write_file(out_path, text);
  }
}

inline footprint::Footprint read_footprint(const fs::path& path) { return footprint::footprint_from_json(read_json(path)); }

struct SpaceArgs {
  std::string path;
  std::size_t dim = 0;
  bool cased = false;
  std::string space_id;

  void add_to(CLI::App* cmd, bool required = true) {
    auto* o = cmd->add_option("--vectors", path, "GloVe-format vector file");
    if (required) o->required();
    o->check(CLI::ExistingFile);
    cmd->add_option("--dim", dim, "Expected dimension (checked when given)");
    cmd->add_flag("--cased", cased, "Do not lowercase tokens");
    cmd->add_option("--space-id", space_id, "Identifier recorded in footprints (default: file name)");
  }

  vsm::VectorSpace load() const {
    vsm::LoadOptions opt;
    if (dim) opt.expected_dim = dim;
    opt.lowercase = !cased;
    opt.space_id = space_id;
    return vsm::load_vectors(path, opt);
  }
};

inline void check_space(const vsm::VectorSpace& space, const std::vector<footprint::Footprint>& fps) {
  for (const auto& fp : fps) {
    if (fp.space_id != space.id()) {
      throw Error(ErrorKind::SchemaError,
                  "footprint " + fp.source + " was built from '" + fp.space_id + "', not '" + space.id() + "'");
    }
  }
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Political footprints: key terms of a discourse in a word vector space", "footprint"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "footprint 1.0.0");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Split transcripts into clean per-speaker documents");
  std::vector<std::string> ingest_inputs;
  std::string ingest_config, ingest_format, ingest_out;
  std::vector<std::string> ingest_exclude;
  ingest->add_option("inputs", ingest_inputs, "Transcript files")->required()->check(CLI::ExistingFile);
  ingest->add_option("--config", ingest_config, "Corpus INI config")->check(CLI::ExistingFile);
  ingest->add_option("--format", ingest_format, "labels or document (overrides the config)")
      ->check(CLI::IsMember({"labels", "document"}));
  ingest->add_option("--exclude", ingest_exclude, "Speakers to drop (e.g. moderators)");
  ingest->add_option("--out", ingest_out, "Output directory")->required();

  // extract
  auto* extract = app.add_subcommand("extract", "Extract scored key terms from a document");
  std::string extract_doc, extract_source, extract_out;
  std::string extract_lexicons = (fs::path(PFP_DEFAULT_DATA_DIR) / "lexicons").string();
  nlu::ExtractParams extract_params;
  extract->add_option("document", extract_doc, "UTF-8 text file")->required()->check(CLI::ExistingFile);
  extract->add_option("--source", extract_source, "Document id (default: file stem)");
  extract->add_option("--lexicons", extract_lexicons, "Lexicon directory")->capture_default_str();
  extract->add_option("--max-terms", extract_params.max_terms, "Maximum number of terms")->check(CLI::PositiveNumber);
  extract->add_option("--ngram-max", extract_params.ngram_max, "Longest candidate in words")->check(CLI::PositiveNumber);
  extract->add_option("--window", extract_params.window, "Context window for sentiment/emotion");
  extract->add_option("--min-ngram-count", extract_params.min_ngram_count, "Minimum count for multiword terms");
  extract->add_option("--out", extract_out, "Output file (default: stdout)");

  // import-nlu
  auto* import_nlu = app.add_subcommand("import-nlu", "Import Watson-style entity and keyword JSON");
  std::string import_entities, import_keywords, import_source, import_out;
  import_nlu->add_option("--entities", import_entities, "JSON with an entities array")->required()->check(CLI::ExistingFile);
  import_nlu->add_option("--keywords", import_keywords, "JSON with a keywords array")->required()->check(CLI::ExistingFile);
  import_nlu->add_option("--source", import_source, "Document id")->required();
  import_nlu->add_option("--out", import_out, "Output file (default: stdout)");

  // footprint
  auto* build = app.add_subcommand("footprint", "Embed key terms into a vector space");
  std::string build_keyterms, build_out, build_policy = "average";
  detail::SpaceArgs build_space;
  build->add_option("--keyterms", build_keyterms, "Key-term JSON")->required()->check(CLI::ExistingFile);
  build_space.add_to(build);
  build->add_option("--policy", build_policy, "Multiword policy")->capture_default_str()->check(CLI::IsMember({"average", "first", "skip"}));
  build->add_option("--out", build_out, "Output file (default: stdout)");

  // clusters
  auto* clusters = app.add_subcommand("clusters", "Clusters of footprint terms around the most relevant ones");
  std::string clusters_fp, clusters_out;
  std::size_t clusters_seeds = 10, clusters_k = 10;
  bool clusters_global = false;
  detail::SpaceArgs clusters_space;
  clusters->add_option("--footprint", clusters_fp, "Footprint JSON")->required()->check(CLI::ExistingFile);
  clusters->add_option("--seeds", clusters_seeds, "Number of seed terms")->capture_default_str()->check(CLI::PositiveNumber);
  clusters->add_option("--k", clusters_k, "Neighbors per seed")->capture_default_str()->check(CLI::PositiveNumber);
  clusters->add_flag("--global", clusters_global, "Search neighbors in the whole vector space");
  clusters_space.add_to(clusters, false);
  clusters->add_option("--out", clusters_out, "Output file (default: stdout)");

  // theme
  auto* theme = app.add_subcommand("theme", "Compare how footprints use a theme's nearest words");
  std::vector<std::string> theme_fps;
  std::string theme_word, theme_drill, theme_out;
  std::size_t theme_n = 20, theme_k = 10;
  detail::SpaceArgs theme_space;
  theme_space.add_to(theme);
  theme->add_option("--footprints", theme_fps, "Footprint JSON files")->required()->check(CLI::ExistingFile);
  theme->add_option("--word", theme_word, "Theme word")->required();
  theme->add_option("--n", theme_n, "Number of nearest words")->capture_default_str()->check(CLI::PositiveNumber);
  theme->add_option("--drill", theme_drill, "Also cluster each footprint around this term");
  theme->add_option("--k", theme_k, "Neighbors per drilldown cluster")->capture_default_str()->check(CLI::PositiveNumber);
  theme->add_option("--out", theme_out, "Output file (default: stdout)");

  // distances
  auto* distances = app.add_subcommand("distances", "Cosine distances between footprint centroids");
  std::vector<std::string> dist_fps;
  std::string dist_weighting = "uniform", dist_out;
  distances->add_option("--footprints", dist_fps, "Footprint JSON files")->required()->check(CLI::ExistingFile);
  distances->add_option("--weighting", dist_weighting, "uniform or relevance")->capture_default_str()
      ->check(CLI::IsMember({"uniform", "relevance"}));
  distances->add_option("--out", dist_out, "Output file (default: stdout)");

  // kmeans
  auto* km = app.add_subcommand("kmeans", "Spherical k-means over footprint terms");
  std::string km_fp, km_out;
  footprint::KMeansParams km_params;
  km->add_option("--footprint", km_fp, "Footprint JSON")->required()->check(CLI::ExistingFile);
  km->add_option("--k", km_params.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
  km->add_flag("--weighted", km_params.weighted, "Weight centroid updates by relevance");
  km->add_option("--seed", km_params.rng_seed, "RNG seed")->capture_default_str();
  km->add_option("--max-iter", km_params.max_iter, "Iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
  km->add_option("--tol", km_params.tol, "Centroid movement tolerance")->capture_default_str();
  km->add_option("--out", km_out, "Output file (default: stdout)");

  // export
  auto* exp = app.add_subcommand("export", "Write projector TSVs, word-cloud JSON and PCA coordinates");
  std::string exp_fp, exp_dir;
  std::size_t exp_seeds = 10, exp_k = 10;
  exporting::CloudOptions exp_cloud;
  exp->add_option("--footprint", exp_fp, "Footprint JSON")->required()->check(CLI::ExistingFile);
  exp->add_option("--out-dir", exp_dir, "Output directory")->required();
  exp->add_option("--seeds", exp_seeds, "Word-cloud seed terms")->capture_default_str()->check(CLI::PositiveNumber);
  exp->add_option("--k", exp_k, "Word-cloud neighbors per seed")->capture_default_str()->check(CLI::PositiveNumber);
  exp->add_option("--negative-threshold", exp_cloud.negative_threshold, "Sentiment at or below is negative")->capture_default_str();
  exp->add_option("--positive-threshold", exp_cloud.positive_threshold, "Sentiment at or above is positive")->capture_default_str();
  exp->add_option("--emotion-threshold", exp_cloud.emotion_threshold, "Minimum score for a dominant emotion")->capture_default_str();

  // serve
  auto* srv = app.add_subcommand("serve", "Serve a workspace over HTTP/JSON");
  std::string srv_workspace, srv_bind = "127.0.0.1:8080", srv_static, srv_cors = "*";
  srv->add_option("--workspace", srv_workspace, "Directory with workspace.json")->required()->check(CLI::ExistingDirectory);
  srv->add_option("--bind", srv_bind, "host:port")->capture_default_str();
  srv->add_option("--static", srv_static, "Directory of UI files to serve at /")->check(CLI::ExistingDirectory);
  srv->add_option("--cors-origin", srv_cors, "Access-Control-Allow-Origin value")->capture_default_str();

  std::vector<const char*> argv{"footprint"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (*ingest) {
      corpus::CorpusConfig cfg;
      if (!ingest_config.empty()) cfg = corpus::parse_corpus_config(io::read_file(ingest_config));
      if (ingest_format == "document") {
        const auto keep = cfg.format.document_speaker;
        cfg.format = corpus::TranscriptFormat::document();
        cfg.format.document_speaker = keep;
      } else if (ingest_format == "labels") {
        cfg.format.kind = corpus::TranscriptFormat::Kind::SpeakerLabels;
      }
      auto exclude = cfg.moderators;
      exclude.insert(exclude.end(), ingest_exclude.begin(), ingest_exclude.end());

      std::vector<corpus::Utterance> all;
      std::map<std::string, std::set<std::string>> sources;
      std::size_t removed = 0;
      for (const auto& input : ingest_inputs) {
        const auto name = fs::path(input).filename().string();
        auto utts = corpus::filter_stage_directions(corpus::parse_transcript(io::read_file(input), cfg.format),
                                                    cfg.stage_patterns, &removed);
        for (auto& u : utts) {
          sources[u.speaker].insert(name);
          all.push_back(std::move(u));
        }
      }
      const auto docs = corpus::split_by_speaker(all, exclude);
      nlohmann::ordered_json manifest;
      manifest["stage_directions_removed"] = removed;
      manifest["documents"] = nlohmann::ordered_json::array();
      for (const auto& d : docs) {
        const auto file = corpus::speaker_file_stem(d.speaker) + ".txt";
        io::write_file(fs::path(ingest_out) / file, d.text + "\n");
        nlohmann::ordered_json entry;
        entry["speaker"] = d.speaker;
        entry["token_count"] = d.token_count;
        entry["file"] = file;
        entry["sources"] = sources[d.speaker];
        manifest["documents"].push_back(std::move(entry));
      }
      io::write_file(fs::path(ingest_out) / "manifest.json", manifest.dump(2) + "\n");
      err << "ingest: " << docs.size() << " speaker document(s), " << removed << " stage direction(s) removed\n";
      return kExitOk;
    }

    if (*extract) {
      const auto lex = nlu::load_lexicons(extract_lexicons);
      const auto text = io::read_file(extract_doc);
      if (auto bad = text::find_invalid_text(text)) {
        throw Error(ErrorKind::MalformedInput, extract_doc + ": non-text byte at offset " + std::to_string(*bad));
      }
      const auto source = extract_source.empty() ? fs::path(extract_doc).stem().string() : extract_source;
      detail::emit(extract_out, nlu::keyterms_to_json(source, nlu::extract_keyterms(text, lex, extract_params)), out);
      return kExitOk;
    }

    if (*import_nlu) {
      const auto terms = nlu::import_nlu_json(detail::read_json(import_entities), detail::read_json(import_keywords));
      detail::emit(import_out, nlu::keyterms_to_json(import_source, terms), out);
      return kExitOk;
    }

    if (*build) {
      const auto doc = nlu::keyterms_from_json(detail::read_json(build_keyterms));
      const auto space = build_space.load();
      footprint::BuildReport report;
      const auto fp = footprint::build_footprint(doc.source, doc.terms, space, *vsm::parse_policy(build_policy), &report);
      for (const auto& d : report.dropped) err << "footprint: dropped '" << d.surface << "' (" << d.reason << ")\n";
      detail::emit(build_out, footprint::footprint_to_json(fp), out);
      return kExitOk;
    }

    if (*clusters) {
      const auto fp = detail::read_footprint(clusters_fp);
      std::optional<vsm::VectorSpace> space;
      if (clusters_global) {
        if (clusters_space.path.empty()) throw CLI::RequiredError("--vectors (needed by --global)");
        space = clusters_space.load();
        detail::check_space(*space, {fp});
      }
      const auto scope = clusters_global ? footprint::NeighborScope::Space : footprint::NeighborScope::Footprint;
      detail::emit(clusters_out,
                   footprint::clusters_to_json(fp.source, footprint::theme_clusters(fp, clusters_seeds, clusters_k, scope,
                                                                                    space ? &*space : nullptr)),
                   out);
      return kExitOk;
    }

    if (*theme) {
      std::vector<footprint::Footprint> fps;
      for (const auto& f : theme_fps) fps.push_back(detail::read_footprint(f));
      const auto space = theme_space.load();
      detail::check_space(space, fps);
      auto j = footprint::theme_to_json(footprint::compare_theme(space, fps, theme_word, theme_n));
      if (!theme_drill.empty()) {
        j["drilldown"] = footprint::drilldown_to_json(theme_drill, footprint::drilldown(fps, theme_drill, theme_k));
      }
      detail::emit(theme_out, j, out);
      return kExitOk;
    }

    if (*distances) {
      std::vector<footprint::Footprint> fps;
      for (const auto& f : dist_fps) fps.push_back(detail::read_footprint(f));
      detail::emit(dist_out,
                   footprint::distances_to_json(footprint::distance_matrix(fps, *footprint::parse_weighting(dist_weighting))),
                   out);
      return kExitOk;
    }

    if (*km) {
      const auto fp = detail::read_footprint(km_fp);
      detail::emit(km_out, footprint::kmeans_to_json(fp, km_params, footprint::kmeans(fp, km_params)), out);
      return kExitOk;
    }

    if (*exp) {
      const auto fp = detail::read_footprint(exp_fp);
      const fs::path dir(exp_dir);
      exporting::write_projector(fp, dir, exp_cloud);
      exporting::write_wordcloud(footprint::theme_clusters(fp, exp_seeds, exp_k), dir / "wordcloud.json", exp_cloud);
      if (fp.terms.size() >= 2) {
        const auto proj = exporting::project_footprint(fp);
        io::write_file(dir / "pca.tsv", exporting::pca_tsv(fp, proj));
      }
      return kExitOk;
    }

    if (*srv) {
      server::ServeOptions opt;
      const auto colon = srv_bind.rfind(':');
      try {
        if (colon == std::string::npos) throw std::invalid_argument("no port");
        opt.host = srv_bind.substr(0, colon);
        opt.port = std::stoi(srv_bind.substr(colon + 1));
      } catch (const std::exception&) {
        err << "--bind must be host:port\n";
        return kExitUsage;
      }
      opt.cors_origin = srv_cors;
      opt.static_dir = srv_static;
      const auto ws = server::load_workspace(srv_workspace);
      server::serve(ws, opt, [&](int port) {
        err << "serving " << ws.footprints.size() << " footprint(s) on http://" << opt.host << ":" << port << "\n";
      });
      return kExitOk;
    }
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::regex_error& e) {
    err << "error: bad pattern: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace pfp::cli
