#pragma once

// Political footprints: a discourse's key terms placed in a vector space,
// plus the three analysis heuristics built on them.
//
//   1. theme_clusters / neighbors_of: clusters of the discourse's own terms
//      around its most relevant ones (kmeans automates this).
//   2. compare_theme / drilldown: a theme word's global neighbors checked
//      against each speaker's vocabulary, then per-speaker clusters.
//   3. footprint_centroid / distance_matrix: centroid affinity between
//      footprints.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pfp/error.hpp"
#include "pfp/format.hpp"
#include "pfp/nlu.hpp"
#include "pfp/text.hpp"
#include "pfp/vsm.hpp"

namespace pfp::footprint {

using nlu::KeyTerm;
using vsm::EmbeddedTerm;
using vsm::VectorSpace;

struct FootprintTerm {
  KeyTerm key;
  EmbeddedTerm embedded;

  const std::string& surface() const noexcept { return key.surface; }
  vsm::VectorView vector() const noexcept { return embedded.vector; }
};

struct Footprint {
  std::string source;
  std::string space_id;
  std::vector<FootprintTerm> terms;  // relevance descending, surface ascending

  const FootprintTerm* find(std::string_view surface) const {
    const auto key = nlu::term_key(surface);
    for (const auto& t : terms) {
      if (nlu::term_key(t.surface()) == key) return &t;
    }
    return nullptr;
  }
};

struct DroppedTerm {
  std::string surface;
  std::string reason;
};

struct BuildReport {
  std::vector<DroppedTerm> dropped;
  std::size_t duplicates = 0;
};

namespace detail {

inline bool ranks_before(const KeyTerm& a, const KeyTerm& b) {
  if (a.relevance != b.relevance) return a.relevance > b.relevance;
  return a.surface < b.surface;
}

inline bool is_zero(vsm::VectorView v) {
  return std::all_of(v.begin(), v.end(), [](float x) { return x == 0.0f; });
}

}  // namespace detail

// Embeds every key term. Terms that cannot be embedded (or embed to a zero
// vector) are dropped and reported; case-folded duplicates keep the more
// relevant record.
inline Footprint build_footprint(std::string source, std::vector<KeyTerm> keyterms, const VectorSpace& space,
                                 vsm::MultiwordPolicy policy = vsm::MultiwordPolicy::Average,
                                 BuildReport* report = nullptr) {
  if (keyterms.empty()) throw Error(ErrorKind::EmptyInput, "no key terms to build a footprint from");
  BuildReport local;
  BuildReport& rep = report ? *report : local;
  rep = {};

  std::stable_sort(keyterms.begin(), keyterms.end(), detail::ranks_before);
  Footprint fp{std::move(source), space.id(), {}};
  std::unordered_set<std::string> seen;
  for (auto& kt : keyterms) {
    kt.surface = text::collapse_whitespace(kt.surface);
    if (!seen.insert(nlu::term_key(kt.surface)).second) {
      ++rep.duplicates;
      continue;
    }
    auto embedded = vsm::try_embed_term(space, kt.surface, policy);
    if (!embedded) {
      rep.dropped.push_back({kt.surface, "unembeddable"});
      continue;
    }
    if (detail::is_zero(embedded->vector)) {
      rep.dropped.push_back({kt.surface, "zero vector"});
      continue;
    }
    embedded->surface = kt.surface;
    fp.terms.push_back({std::move(kt), std::move(*embedded)});
  }
  if (fp.terms.empty()) throw Error(ErrorKind::NothingEmbeddable, "none of the key terms is in the vector space");
  return fp;
}

// ---------------------------------------------------------------------------
// Theme clusters

enum class NeighborScope { Footprint, Space };

struct ClusterMember {
  FootprintTerm term;
  double similarity = 0.0;
  bool in_footprint = true;  // false only for global-space neighbors
};

struct ThemeCluster {
  FootprintTerm seed;
  std::vector<ClusterMember> members;  // similarity descending
};

namespace detail {

inline ClusterMember space_member(const Footprint& fp, const VectorSpace& space, const vsm::Neighbor& n) {
  if (const auto* t = fp.find(n.token)) return {*t, n.similarity, true};
  FootprintTerm ft;
  ft.key.surface = n.token;
  ft.embedded.surface = n.token;
  const auto v = space.lookup(n.token);
  ft.embedded.vector.assign(v->begin(), v->end());
  ft.embedded.parts = {n.token};
  return {std::move(ft), n.similarity, false};
}

inline ThemeCluster cluster_around(const Footprint& fp, const FootprintTerm& seed, std::size_t k, NeighborScope scope,
                                   const VectorSpace* space) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  ThemeCluster cluster{seed, {}};
  if (scope == NeighborScope::Space) {
    if (!space) throw Error(ErrorKind::InvalidArgument, "global neighbor search needs a vector space");
    std::unordered_set<std::string> exclude{seed.surface()};
    for (const auto& n : vsm::nearest(*space, seed.vector(), k, exclude)) {
      cluster.members.push_back(space_member(fp, *space, n));
    }
    return cluster;
  }
  const auto seed_key = nlu::term_key(seed.surface());
  for (const auto& t : fp.terms) {
    if (nlu::term_key(t.surface()) == seed_key) continue;
    cluster.members.push_back({t, vsm::cosine(seed.vector(), t.vector()), true});
  }
  std::sort(cluster.members.begin(), cluster.members.end(), [](const ClusterMember& a, const ClusterMember& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.term.surface() < b.term.surface();
  });
  if (cluster.members.size() > k) cluster.members.resize(k);
  return cluster;
}

}  // namespace detail

// Cluster seeded by an arbitrary term of the footprint.
inline ThemeCluster neighbors_of(const Footprint& fp, std::string_view seed_surface, std::size_t k,
                                 NeighborScope scope = NeighborScope::Footprint, const VectorSpace* space = nullptr) {
  const auto* seed = fp.find(seed_surface);
  if (!seed) {
    throw Error(ErrorKind::SeedNotInFootprint, "'" + std::string(seed_surface) + "' is not in footprint " + fp.source);
  }
  return detail::cluster_around(fp, *seed, k, scope, space);
}

// One cluster per seed; seeds are the num_seeds most relevant terms. By
// default members come from the footprint's own vocabulary.
inline std::vector<ThemeCluster> theme_clusters(const Footprint& fp, std::size_t num_seeds = 10, std::size_t k = 10,
                                                NeighborScope scope = NeighborScope::Footprint,
                                                const VectorSpace* space = nullptr) {
  if (fp.terms.empty()) throw Error(ErrorKind::EmptyInput, "footprint has no terms");
  if (num_seeds == 0) throw Error(ErrorKind::InvalidArgument, "num_seeds must be >= 1");
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  std::vector<const FootprintTerm*> order;
  for (const auto& t : fp.terms) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](const FootprintTerm* a, const FootprintTerm* b) { return detail::ranks_before(a->key, b->key); });
  if (order.size() > num_seeds) order.resize(num_seeds);
  std::vector<ThemeCluster> out;
  for (const auto* seed : order) out.push_back(detail::cluster_around(fp, *seed, k, scope, space));
  return out;
}

// ---------------------------------------------------------------------------
// Theme comparison across footprints

// The term through which a footprint "uses" a token: an exact case-folded
// surface match first, otherwise the most relevant term that has the token
// as one of its component words.
inline const FootprintTerm* find_usage(const Footprint& fp, std::string_view token) {
  if (const auto* t = fp.find(token)) return t;
  const auto key = text::lower(token);
  for (const auto& t : fp.terms) {  // terms are in relevance order
    for (const auto& part : t.embedded.parts) {
      if (text::lower(part) == key) return &t;
    }
  }
  return nullptr;
}

struct ThemeCandidate {
  std::string token;
  double similarity = 0.0;
  std::vector<std::pair<std::string, bool>> usage;  // footprint id -> used, input order

  std::size_t used_by() const {
    return static_cast<std::size_t>(std::count_if(usage.begin(), usage.end(), [](const auto& u) { return u.second; }));
  }
};

struct ThemeComparison {
  std::string theme;
  std::vector<std::string> footprint_ids;
  std::vector<ThemeCandidate> candidates;  // similarity descending
};

namespace detail {

inline void require_unique_ids(const std::vector<Footprint>& fps) {
  std::set<std::string> ids;
  for (const auto& fp : fps) {
    if (!ids.insert(fp.source).second) throw Error(ErrorKind::InvalidArgument, "duplicate footprint id " + fp.source);
  }
}

}  // namespace detail

inline ThemeComparison compare_theme(const VectorSpace& space, const std::vector<Footprint>& fps, std::string_view theme,
                                     std::size_t n = 20) {
  if (fps.empty()) throw Error(ErrorKind::EmptyInput, "compare_theme needs at least one footprint");
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  detail::require_unique_ids(fps);
  const auto query = space.lookup(theme);
  if (!query) throw Error(ErrorKind::ThemeNotInSpace, "'" + std::string(theme) + "' is not in the vector space");

  ThemeComparison out;
  out.theme = space.normalize(theme);
  for (const auto& fp : fps) out.footprint_ids.push_back(fp.source);
  for (auto& nb : vsm::nearest(space, *query, n, {out.theme})) {
    ThemeCandidate c{std::move(nb.token), nb.similarity, {}};
    for (const auto& fp : fps) c.usage.emplace_back(fp.source, find_usage(fp, c.token) != nullptr);
    out.candidates.push_back(std::move(c));
  }
  return out;
}

// Per-footprint clusters around `chosen`, for the footprints that use it.
// Footprints that do not use it are simply absent from the result.
inline std::map<std::string, ThemeCluster> drilldown(const std::vector<Footprint>& fps, std::string_view chosen,
                                                     std::size_t k = 10) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  std::map<std::string, ThemeCluster> out;
  for (const auto& fp : fps) {
    if (const auto* seed = find_usage(fp, chosen)) {
      out.insert_or_assign(fp.source, detail::cluster_around(fp, *seed, k, NeighborScope::Footprint, nullptr));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Footprint distances

enum class Weighting { Uniform, Relevance };

inline std::string_view to_string(Weighting w) { return w == Weighting::Uniform ? "uniform" : "relevance"; }

inline std::optional<Weighting> parse_weighting(std::string_view s) {
  if (s == "uniform") return Weighting::Uniform;
  if (s == "relevance") return Weighting::Relevance;
  return std::nullopt;
}

inline vsm::Vector footprint_centroid(const Footprint& fp, Weighting weighting = Weighting::Uniform) {
  if (fp.terms.empty()) throw Error(ErrorKind::EmptyInput, "footprint has no terms");
  std::vector<vsm::VectorView> views;
  std::vector<double> weights;
  for (const auto& t : fp.terms) {
    views.push_back(t.vector());
    if (weighting == Weighting::Relevance) weights.push_back(t.key.relevance);
  }
  return vsm::centroid(std::span<const vsm::VectorView>(views), std::span<const double>(weights));
}

struct DistanceReport {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> matrix;  // cosine distance between centroids
  Weighting weighting = Weighting::Uniform;
};

inline DistanceReport distance_matrix(const std::vector<Footprint>& fps, Weighting weighting = Weighting::Uniform) {
  if (fps.size() < 2) throw Error(ErrorKind::InvalidArgument, "distance_matrix needs at least two footprints");
  detail::require_unique_ids(fps);
  DistanceReport rep;
  rep.weighting = weighting;
  std::vector<vsm::Vector> centroids;
  for (const auto& fp : fps) {
    rep.ids.push_back(fp.source);
    centroids.push_back(footprint_centroid(fp, weighting));
  }
  const std::size_t n = fps.size();
  rep.matrix.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::clamp(1.0 - vsm::cosine(centroids[i], centroids[j]), 0.0, 2.0);
      rep.matrix[i][j] = d;
      rep.matrix[j][i] = d;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// k-means over footprint terms

struct KMeansParams {
  std::size_t k = 5;
  bool weighted = false;  // relevance-weighted centroid updates
  std::uint64_t rng_seed = 0;
  std::size_t max_iter = 100;
  double tol = 1e-6;
};

struct KMeansCluster {
  std::vector<std::size_t> members;  // indices into the input points / footprint terms
  std::vector<double> centroid;
};

struct KMeansResult {
  std::vector<KMeansCluster> clusters;
  std::vector<double> objective_history;  // weighted SSE after each iteration
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Index i with cumulative(i-1) <= target < cumulative(i); zero-width entries
// can never be picked.
inline std::optional<std::size_t> pick_weighted(const std::vector<double>& mass, double u) {
  double total = 0.0;
  for (const double m : mass) total += m;
  if (!(total > 0.0)) return std::nullopt;
  const double target = u * total;
  double cum = 0.0;
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    cum += mass[i];
    last = i;
    if (target < cum) return i;
  }
  return last;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding. Points are used as given; callers
// wanting spherical k-means pass unit vectors. A point with weight 0 is still
// assigned but never moves a centroid and is never drawn as a seed.
inline KMeansResult kmeans_points(const std::vector<std::vector<double>>& points, const std::vector<double>& weights,
                                  const KMeansParams& params) {
  const std::size_t n = points.size();
  if (params.k == 0) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  if (params.k > n) {
    throw Error(ErrorKind::KTooLarge, "k = " + std::to_string(params.k) + " exceeds " + std::to_string(n) + " points");
  }
  if (weights.size() != n) throw Error(ErrorKind::InvalidArgument, "one weight per point required");
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "weights must be finite and >= 0");
  }

  std::mt19937_64 rng(params.rng_seed);
  std::vector<std::vector<double>> centroids;
  std::vector<char> chosen(n, 0);

  // k-means++: first seed drawn by weight, later ones by weight * D^2.
  auto first = detail::pick_weighted(weights, detail::uniform01(rng));
  if (!first) first = 0;
  centroids.push_back(points[*first]);
  chosen[*first] = 1;
  while (centroids.size() < params.k) {
    std::vector<double> mass(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) best = std::min(best, detail::squared_distance(points[i], c));
      mass[i] = weights[i] * best;
    }
    auto next = detail::pick_weighted(mass, detail::uniform01(rng));
    if (!next) {
      // Every remaining point coincides with a seed or weighs nothing.
      for (std::size_t i = 0; i < n && !next; ++i) {
        if (!chosen[i] && weights[i] > 0.0) next = i;
      }
      for (std::size_t i = 0; i < n && !next; ++i) {
        if (!chosen[i]) next = i;
      }
    }
    centroids.push_back(points[*next]);
    chosen[*next] = 1;
  }

  KMeansResult result;
  std::vector<std::size_t> assignment(n, 0);
  const std::size_t dim = points.empty() ? 0 : points.front().size();
  for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = detail::squared_distance(points[i], centroids[0]);
      for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d = detail::squared_distance(points[i], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assignment[i] = best;
    }

    std::vector<std::vector<double>> sums(params.k, std::vector<double>(dim, 0.0));
    std::vector<double> mass(params.k, 0.0);
    std::vector<std::size_t> counts(params.k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (weights[i] == 0.0) continue;
      const auto c = assignment[i];
      ++counts[c];
      mass[c] += weights[i];
      for (std::size_t d = 0; d < dim; ++d) sums[c][d] += weights[i] * points[i][d];
    }

    double movement = 0.0;
    auto updated = centroids;
    for (std::size_t c = 0; c < params.k; ++c) {
      if (mass[c] > 0.0) {
        for (std::size_t d = 0; d < dim; ++d) updated[c][d] = sums[c][d] / mass[c];
      }
    }
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (weights[i] == 0.0) continue;
      objective += weights[i] * detail::squared_distance(points[i], updated[assignment[i]]);
    }
    // Clusters with no weighted member restart at the weighted point farthest
    // from its centroid.
    for (std::size_t c = 0; c < params.k; ++c) {
      if (counts[c] > 0) continue;
      std::optional<std::size_t> far;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (weights[i] == 0.0) continue;
        const double d = detail::squared_distance(points[i], updated[assignment[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far) updated[c] = points[*far];
    }
    for (std::size_t c = 0; c < params.k; ++c) {
      movement = std::max(movement, std::sqrt(detail::squared_distance(updated[c], centroids[c])));
    }
    centroids = std::move(updated);
    result.objective_history.push_back(objective);
    result.iterations = iter + 1;
    if (movement < params.tol) {
      result.converged = true;
      break;
    }
  }

  result.clusters.resize(params.k);
  for (std::size_t c = 0; c < params.k; ++c) result.clusters[c].centroid = centroids[c];
  for (std::size_t i = 0; i < n; ++i) {
    // Final assignment against the final centroids.
    std::size_t best = 0;
    double best_d = detail::squared_distance(points[i], centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
      const double d = detail::squared_distance(points[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    result.clusters[best].members.push_back(i);
  }
  return result;
}

// Spherical k-means over the footprint's term vectors (each scaled to unit
// length). The weighted variant weighs each term by its relevance.
inline KMeansResult kmeans(const Footprint& fp, const KMeansParams& params) {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  for (const auto& t : fp.terms) {
    std::vector<double> p(t.vector().begin(), t.vector().end());
    double norm = 0.0;
    for (const double x : p) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error(ErrorKind::ZeroVector, "term '" + t.surface() + "' has a zero vector");
    for (auto& x : p) x /= norm;
    points.push_back(std::move(p));
    weights.push_back(params.weighted ? t.key.relevance : 1.0);
  }
  return kmeans_points(points, weights, params);
}

// ---------------------------------------------------------------------------
// JSON interchange

using Json = nlohmann::ordered_json;

inline Json vector_to_json(vsm::VectorView v) {
  Json arr = Json::array();
  for (const float x : v) arr.push_back(format::json_safe(x));
  return arr;
}

inline Json term_to_json(const FootprintTerm& t, bool with_vector = true) {
  Json j = nlu::keyterm_to_json(t.key);
  if (with_vector) j["vector"] = vector_to_json(t.vector());
  j["synthetic"] = t.embedded.synthetic;
  j["missing_parts"] = t.embedded.missing_parts;
  return j;
}

inline Json footprint_to_json(const Footprint& fp) {
  Json j;
  j["source"] = fp.source;
  j["space_id"] = fp.space_id;
  j["terms"] = Json::array();
  for (const auto& t : fp.terms) j["terms"].push_back(term_to_json(t));
  return j;
}

inline Footprint footprint_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::SchemaError, "footprint is not an object");
  for (const char* f : {"source", "space_id"}) {
    if (!j.contains(f) || !j[f].is_string()) throw Error(ErrorKind::SchemaError, std::string(f) + " missing");
  }
  if (!j.contains("terms") || !j["terms"].is_array()) throw Error(ErrorKind::SchemaError, "terms missing");
  Footprint fp;
  fp.source = j["source"].get<std::string>();
  fp.space_id = j["space_id"].get<std::string>();
  std::optional<std::size_t> dim;
  std::size_t i = 0;
  for (const auto& item : j["terms"]) {
    const std::string where = "terms[" + std::to_string(i++) + "]";
    FootprintTerm t;
    t.key = nlu::keyterm_from_json(item, where);
    if (!item.contains("vector") || !item["vector"].is_array()) throw Error(ErrorKind::SchemaError, where + ".vector missing");
    if (!item.contains("synthetic") || !item["synthetic"].is_boolean()) {
      throw Error(ErrorKind::SchemaError, where + ".synthetic missing");
    }
    for (const auto& x : item["vector"]) {
      if (!x.is_number()) throw Error(ErrorKind::RangeError, where + ".vector has a non-numeric entry");
      const auto f = static_cast<float>(x.get<double>());
      if (!std::isfinite(f)) throw Error(ErrorKind::RangeError, where + ".vector has a non-finite entry");
      t.embedded.vector.push_back(f);
    }
    if (t.embedded.vector.empty()) throw Error(ErrorKind::SchemaError, where + ".vector is empty");
    if (dim && *dim != t.embedded.vector.size()) throw Error(ErrorKind::DimMismatch, where + ".vector dimension differs");
    dim = t.embedded.vector.size();
    t.embedded.surface = t.key.surface;
    t.embedded.synthetic = item["synthetic"].get<bool>();
    if (item.contains("missing_parts") && item["missing_parts"].is_array()) {
      for (const auto& m : item["missing_parts"]) {
        if (m.is_string()) t.embedded.missing_parts.push_back(m.get<std::string>());
      }
    }
    const auto collapsed = text::collapse_whitespace(t.key.surface);
    if (t.embedded.synthetic) {
      std::size_t start = 0;
      while (start < collapsed.size()) {
        auto end = collapsed.find(' ', start);
        if (end == std::string::npos) end = collapsed.size();
        t.embedded.parts.push_back(text::lower(collapsed.substr(start, end - start)));
        start = end + 1;
      }
    } else {
      t.embedded.parts.push_back(text::lower(collapsed));
    }
    if (fp.find(t.key.surface)) throw Error(ErrorKind::SchemaError, where + ": duplicate surface " + t.key.surface);
    fp.terms.push_back(std::move(t));
  }
  return fp;
}

inline Json member_to_json(const ClusterMember& m) {
  Json j = term_to_json(m.term, false);
  j["similarity"] = m.similarity;
  j["in_footprint"] = m.in_footprint;
  return j;
}

inline Json cluster_to_json(const ThemeCluster& c) {
  Json j;
  j["seed"] = term_to_json(c.seed, false);
  j["members"] = Json::array();
  for (const auto& m : c.members) j["members"].push_back(member_to_json(m));
  return j;
}

inline Json clusters_to_json(std::string_view source, const std::vector<ThemeCluster>& clusters) {
  Json j;
  j["source"] = source;
  j["clusters"] = Json::array();
  for (const auto& c : clusters) j["clusters"].push_back(cluster_to_json(c));
  return j;
}

inline Json theme_to_json(const ThemeComparison& t) {
  Json j;
  j["theme"] = t.theme;
  j["footprints"] = t.footprint_ids;
  j["candidates"] = Json::array();
  for (const auto& c : t.candidates) {
    Json cj;
    cj["token"] = c.token;
    cj["similarity"] = c.similarity;
    Json usage = Json::object();
    for (const auto& [id, used] : c.usage) usage[id] = used;
    cj["usage"] = std::move(usage);
    cj["used_by"] = c.used_by();
    j["candidates"].push_back(std::move(cj));
  }
  return j;
}

inline Json drilldown_to_json(std::string_view chosen, const std::map<std::string, ThemeCluster>& clusters) {
  Json j;
  j["term"] = chosen;
  j["clusters"] = Json::object();
  for (const auto& [id, c] : clusters) j["clusters"][id] = cluster_to_json(c);
  return j;
}

inline Json distances_to_json(const DistanceReport& r) {
  Json j;
  j["ids"] = r.ids;
  j["weighting"] = to_string(r.weighting);
  j["matrix"] = r.matrix;
  return j;
}

inline Json kmeans_to_json(const Footprint& fp, const KMeansParams& params, const KMeansResult& r) {
  Json j;
  j["source"] = fp.source;
  j["k"] = params.k;
  j["weighted"] = params.weighted;
  j["rng_seed"] = params.rng_seed;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["objective_history"] = r.objective_history;
  j["clusters"] = Json::array();
  for (const auto& c : r.clusters) {
    Json cj;
    cj["members"] = Json::array();
    for (const auto i : c.members) cj["members"].push_back(fp.terms[i].surface());
    cj["centroid"] = c.centroid;
    j["clusters"].push_back(std::move(cj));
  }
  return j;
}

}  // namespace pfp::footprint
