#pragma once

// Read-only HTTP/JSON facade over a workspace of footprints.
//
// Routing and response bodies live in Api, which has no socket code so it can
// be exercised directly; serve() binds Api to cpp-httplib.

#include <charconv>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "pfp/error.hpp"
#include "pfp/export.hpp"
#include "pfp/footprint.hpp"
#include "pfp/io.hpp"
#include "pfp/vsm.hpp"

namespace pfp::server {

struct Workspace {
  vsm::VectorSpace space;
  std::map<std::string, footprint::Footprint> footprints;
  nlohmann::ordered_json config;  // snapshot of workspace.json as loaded

  std::vector<footprint::Footprint> all() const {
    std::vector<footprint::Footprint> out;
    for (const auto& [_, fp] : footprints) out.push_back(fp);
    return out;
  }
};

inline Workspace make_workspace(vsm::VectorSpace space, std::vector<footprint::Footprint> fps) {
  Workspace ws;
  for (auto& fp : fps) {
    if (fp.space_id != space.id()) {
      throw Error(ErrorKind::SchemaError,
                  "footprint " + fp.source + " was built from '" + fp.space_id + "', workspace space is '" + space.id() + "'");
    }
    if (fp.terms.empty()) throw Error(ErrorKind::SchemaError, "footprint " + fp.source + " has no terms");
    if (!fp.terms.empty() && fp.terms.front().vector().size() != space.dim()) {
      throw Error(ErrorKind::DimMismatch, "footprint " + fp.source + " dimension differs from the space");
    }
    const auto id = fp.source;
    if (!ws.footprints.emplace(id, std::move(fp)).second) {
      throw Error(ErrorKind::SchemaError, "duplicate footprint id " + id);
    }
  }
  ws.space = std::move(space);
  ws.config = {{"space_id", ws.space.id()}, {"dim", ws.space.dim()}};
  return ws;
}

// workspace.json:
//   {"vectors": "glove.6B.300d.txt", "footprints": ["trump.json", ...],
//    "lowercase": true, "space_id": "glove.6B.300d.txt"}
// Relative paths resolve against the workspace directory.
inline Workspace load_workspace(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "workspace.json";
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(io::read_file(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("vectors") || !manifest["vectors"].is_string()) {
    throw Error(ErrorKind::SchemaError, "workspace.json: vectors missing");
  }
  if (!manifest.contains("footprints") || !manifest["footprints"].is_array()) {
    throw Error(ErrorKind::SchemaError, "workspace.json: footprints missing");
  }
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : dir / path;
  };
  vsm::LoadOptions opt;
  opt.lowercase = manifest.value("lowercase", true);
  opt.space_id = manifest.value("space_id", std::filesystem::path(manifest["vectors"].get<std::string>()).filename().string());
  auto space = vsm::load_vectors(resolve(manifest["vectors"].get<std::string>()), opt);

  std::vector<footprint::Footprint> fps;
  for (const auto& f : manifest["footprints"]) {
    if (!f.is_string()) throw Error(ErrorKind::SchemaError, "workspace.json: footprint entries must be paths");
    const auto path = resolve(f.get<std::string>());
    try {
      fps.push_back(footprint::footprint_from_json(nlohmann::json::parse(io::read_file(path))));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
  }
  auto ws = make_workspace(std::move(space), std::move(fps));
  ws.config = nlohmann::ordered_json::parse(manifest.dump());
  return ws;
}

struct ApiResponse {
  int status = 200;
  std::string body;
};

using Query = std::multimap<std::string, std::string>;

class Api {
 public:
  explicit Api(const Workspace& ws) : ws_(ws) {}

  ApiResponse handle(std::string_view path, const Query& query = {}) const {
    try {
      return route(split(path), query);
    } catch (const BadParameter& e) {
      return error(422, "InvalidParameter", e.what());
    } catch (const Error& e) {
      return error(status_for(e.kind()), std::string(to_string(e.kind())), e.detail());
    }
  }

 private:
  struct BadParameter : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  static std::vector<std::string> split(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
      while (i < path.size() && path[i] == '/') ++i;
      const auto j = path.find('/', i);
      const auto part = path.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i);
      if (!part.empty()) parts.emplace_back(part);
      if (j == std::string_view::npos) break;
      i = j;
    }
    return parts;
  }

  static int status_for(ErrorKind k) {
    switch (k) {
      case ErrorKind::SeedNotInFootprint:
      case ErrorKind::ThemeNotInSpace:
        return 404;
      case ErrorKind::IoError:
      case ErrorKind::BindError:
        return 500;
      default:
        return 422;
    }
  }

  static ApiResponse error(int status, std::string_view kind, std::string_view message) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    return {status, j.dump()};
  }

  static ApiResponse ok(const nlohmann::ordered_json& j) { return {200, j.dump()}; }

  static std::optional<std::string> param(const Query& q, const std::string& name) {
    const auto it = q.find(name);
    if (it == q.end()) return std::nullopt;
    return it->second;
  }

  static std::size_t count_param(const Query& q, const std::string& name, std::size_t fallback) {
    const auto v = param(q, name);
    if (!v) return fallback;
    std::size_t out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc() || res.ptr != v->data() + v->size() || out == 0 || out > 100000) {
      throw BadParameter(name + " must be a positive integer");
    }
    return out;
  }

  const footprint::Footprint* find(const std::string& id) const {
    const auto it = ws_.footprints.find(id);
    return it == ws_.footprints.end() ? nullptr : &it->second;
  }

  ApiResponse unknown_footprint(const std::string& id) const {
    return error(404, "UnknownFootprint", "no footprint with id '" + id + "'");
  }

  ApiResponse route(const std::vector<std::string>& p, const Query& q) const {
    if (p.size() < 2 || p[0] != "api") return error(404, "NotFound", "no such endpoint");

    if (p[1] == "footprints" && p.size() == 2) {
      nlohmann::ordered_json j;
      j["space_id"] = ws_.space.id();
      j["dim"] = ws_.space.dim();
      j["footprints"] = nlohmann::ordered_json::array();
      for (const auto& [id, fp] : ws_.footprints) {
        j["footprints"].push_back({{"id", id}, {"terms", fp.terms.size()}});
      }
      return ok(j);
    }
    if (p[1] == "footprints" && p.size() == 4) {
      const auto* fp = find(p[2]);
      if (!fp) return unknown_footprint(p[2]);
      if (p[3] == "clusters") {
        const auto seeds = count_param(q, "seeds", 10);
        const auto k = count_param(q, "k", 10);
        auto scope = footprint::NeighborScope::Footprint;
        if (auto s = param(q, "scope")) {
          if (*s == "space") {
            scope = footprint::NeighborScope::Space;
          } else if (*s != "footprint") {
            throw BadParameter("scope must be footprint or space");
          }
        }
        return ok(footprint::clusters_to_json(fp->source, footprint::theme_clusters(*fp, seeds, k, scope, &ws_.space)));
      }
      if (p[3] == "neighbors") {
        const auto seed = param(q, "seed");
        if (!seed || seed->empty()) throw BadParameter("seed is required");
        const auto k = count_param(q, "k", 10);
        return ok(footprint::cluster_to_json(footprint::neighbors_of(*fp, *seed, k)));
      }
      return error(404, "NotFound", "no such endpoint");
    }
    if (p[1] == "theme" && p.size() == 3) {
      const auto n = count_param(q, "n", 20);
      if (ws_.footprints.empty()) throw Error(ErrorKind::EmptyInput, "workspace has no footprints");
      return ok(footprint::theme_to_json(footprint::compare_theme(ws_.space, ws_.all(), p[2], n)));
    }
    if (p[1] == "drilldown" && p.size() == 3) {
      const auto k = count_param(q, "k", 10);
      return ok(footprint::drilldown_to_json(p[2], footprint::drilldown(ws_.all(), p[2], k)));
    }
    if (p[1] == "distances" && p.size() == 2) {
      auto weighting = footprint::Weighting::Uniform;
      if (auto w = param(q, "weighting")) {
        const auto parsed = footprint::parse_weighting(*w);
        if (!parsed) throw BadParameter("weighting must be uniform or relevance");
        weighting = *parsed;
      }
      return ok(footprint::distances_to_json(footprint::distance_matrix(ws_.all(), weighting)));
    }
    if (p[1] == "projection" && p.size() == 3) {
      const auto* fp = find(p[2]);
      if (!fp) return unknown_footprint(p[2]);
      return ok(exporting::projection_to_json(*fp, exporting::project_footprint(*fp)));
    }
    return error(404, "NotFound", "no such endpoint");
  }

  const Workspace& ws_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
  std::filesystem::path static_dir;  // optional built UI
};

// Configured but not yet bound server. The Api must outlive it.
inline std::unique_ptr<httplib::Server> make_http_server(const Api& api, const ServeOptions& opt) {
  auto srv = std::make_unique<httplib::Server>();
  srv->set_default_headers({{"Access-Control-Allow-Origin", opt.cors_origin}});
  srv->Get(R"(/api/.*)", [&api](const httplib::Request& req, httplib::Response& res) {
    Query q(req.params.begin(), req.params.end());
    const auto r = api.handle(req.path, q);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  });
  srv->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  if (!opt.static_dir.empty() && !srv->set_mount_point("/", opt.static_dir.string())) {
    throw Error(ErrorKind::IoError, "static directory not found: " + opt.static_dir.string());
  }
  return srv;
}

// Blocks until the server stops.
inline void serve(const Workspace& ws, const ServeOptions& opt,
                  const std::function<void(int port)>& on_ready = {}) {
  const Api api(ws);
  auto srv = make_http_server(api, opt);
  const int port = opt.port == 0 ? srv->bind_to_any_port(opt.host) : (srv->bind_to_port(opt.host, opt.port) ? opt.port : -1);
  if (port <= 0) throw Error(ErrorKind::BindError, "cannot bind " + opt.host + ":" + std::to_string(opt.port));
  if (on_ready) on_ready(port);
  srv->listen_after_bind();
}

}  // namespace pfp::server
