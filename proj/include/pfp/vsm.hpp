#pragma once

// Pre-trained vector spaces (GloVe text format) and the geometric queries the
// heuristics are built on: cosine, exact k-NN, centroids and a 2-D PCA.
//
// Storage is one contiguous row-major float matrix with a token -> row index.
// Parsing keeps 32-bit floats; every accumulation runs in double, in
// ascending component order.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pfp/error.hpp"
#include "pfp/text.hpp"

namespace pfp::vsm {

using Vector = std::vector<float>;
using VectorView = std::span<const float>;

class VectorSpace {
 public:
  VectorSpace() = default;

  // Rows must be tokens.size() * dim floats; tokens are normalized here and
  // must stay unique afterwards.
  VectorSpace(std::size_t dim, std::vector<std::string> tokens, std::vector<float> data, bool lowercase = true,
              std::string id = {})
      : dim_(dim), lowercase_(lowercase), id_(std::move(id)), tokens_(std::move(tokens)), data_(std::move(data)) {
    if (dim_ == 0) throw Error(ErrorKind::InvalidArgument, "vector space dimension must be positive");
    if (data_.size() != tokens_.size() * dim_) throw Error(ErrorKind::DimMismatch, "row data does not match dim");
    index_.reserve(tokens_.size());
    norms_sq_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      tokens_[i] = normalize(tokens_[i]);
      if (!index_.emplace(tokens_[i], i).second) {
        throw Error(ErrorKind::InvalidArgument, "duplicate token after normalization: " + tokens_[i]);
      }
      double sq = 0.0;
      for (const float x : row(i)) {
        if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite component for " + tokens_[i]);
        sq += static_cast<double>(x) * static_cast<double>(x);
      }
      norms_sq_.push_back(sq);
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool lowercase() const noexcept { return lowercase_; }
  const std::string& id() const noexcept { return id_; }

  const std::string& token(std::size_t row_index) const { return tokens_.at(row_index); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  VectorView row(std::size_t row_index) const { return {data_.data() + row_index * dim_, dim_}; }
  // Sum of squares in double, ascending component order.
  double norm_squared(std::size_t row_index) const { return norms_sq_.at(row_index); }

  std::string normalize(std::string_view token) const {
    return lowercase_ ? text::lower(token) : std::string(token);
  }

  std::optional<std::size_t> index_of(std::string_view token) const {
    const auto it = index_.find(normalize(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Missing tokens are a value, not an error.
  std::optional<VectorView> lookup(std::string_view token) const {
    if (auto i = index_of(token)) return row(*i);
    return std::nullopt;
  }

 private:
  std::size_t dim_ = 0;
  bool lowercase_ = true;
  std::string id_;
  std::vector<std::string> tokens_;
  std::vector<float> data_;
  std::vector<double> norms_sq_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LoadOptions {
  std::optional<std::size_t> expected_dim;
  bool lowercase = true;
  std::string space_id;  // defaults to the file name
};

struct LoadReport {
  std::size_t rejected_lines = 0;    // wrong number of fields
  std::size_t duplicate_tokens = 0;  // later duplicates after normalization
  bool had_header = false;           // FastText "V d" first line
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool is_unsigned_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

// GloVe text format, one `token f1 ... fd` line per word. The dimension comes
// from the first data line; lines with any other arity are counted and
// skipped.
inline VectorSpace parse_vectors(std::istream& in, const LoadOptions& options = {}, LoadReport* report = nullptr) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  rep = {};

  std::size_t dim = 0;
  std::vector<std::string> tokens;
  std::vector<float> data;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;

    if (first_content) {
      first_content = false;
      if (fields.size() == 2 && detail::is_unsigned_integer(fields[0]) && detail::is_unsigned_integer(fields[1])) {
        rep.had_header = true;
        continue;
      }
    }
    if (dim == 0) {
      if (fields.size() < 2) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": no components");
      dim = fields.size() - 1;
      if (options.expected_dim && *options.expected_dim != dim) {
        throw Error(ErrorKind::DimMismatch, "expected dim " + std::to_string(*options.expected_dim) + ", file has " +
                                                std::to_string(dim));
      }
    }
    if (fields.size() != dim + 1) {
      ++rep.rejected_lines;
      continue;
    }

    const std::size_t base = data.size();
    data.resize(base + dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const auto f = fields[k + 1];
      float value = 0.0f;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(value)) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad component '" + std::string(f) + "'");
      }
      data[base + k] = value;
    }
    auto token = options.lowercase ? text::lower(fields[0]) : std::string(fields[0]);
    if (!seen.insert(token).second) {
      ++rep.duplicate_tokens;
      data.resize(base);
      continue;
    }
    tokens.push_back(std::move(token));
  }
  if (tokens.empty()) throw Error(ErrorKind::EmptyFile, "no vectors found");
  return VectorSpace(dim, std::move(tokens), std::move(data), options.lowercase, options.space_id);
}

inline VectorSpace load_vectors(const std::filesystem::path& path, LoadOptions options = {},
                                LoadReport* report = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  if (options.space_id.empty()) options.space_id = path.filename().string();
  return parse_vectors(in, options, report);
}

// ---------------------------------------------------------------------------
// Term embedding

enum class MultiwordPolicy { Average, First, Skip };

inline std::optional<MultiwordPolicy> parse_policy(std::string_view s) {
  if (s == "average") return MultiwordPolicy::Average;
  if (s == "first") return MultiwordPolicy::First;
  if (s == "skip") return MultiwordPolicy::Skip;
  return std::nullopt;
}

struct EmbeddedTerm {
  std::string surface;
  Vector vector;
  bool synthetic = false;  // built from component words
  std::vector<std::string> parts;          // normalized component tokens
  std::vector<std::string> missing_parts;  // components absent from the space
};

// nullopt when the term cannot be embedded under the policy.
inline std::optional<EmbeddedTerm> try_embed_term(const VectorSpace& space, std::string_view surface,
                                                  MultiwordPolicy policy = MultiwordPolicy::Average) {
  const std::string collapsed = text::collapse_whitespace(surface);
  if (collapsed.empty()) return std::nullopt;

  EmbeddedTerm term;
  term.surface = collapsed;
  if (auto v = space.lookup(collapsed)) {
    term.vector.assign(v->begin(), v->end());
    term.parts.push_back(space.normalize(collapsed));
    return term;
  }

  std::size_t start = 0;
  while (start < collapsed.size()) {
    auto end = collapsed.find(' ', start);
    if (end == std::string::npos) end = collapsed.size();
    term.parts.push_back(space.normalize(std::string_view(collapsed).substr(start, end - start)));
    start = end + 1;
  }
  if (term.parts.size() < 2 || policy == MultiwordPolicy::Skip) return std::nullopt;

  std::vector<double> sum(space.dim(), 0.0);
  std::size_t found = 0;
  for (const auto& part : term.parts) {
    const auto v = space.lookup(part);
    if (!v) {
      term.missing_parts.push_back(part);
      continue;
    }
    if (policy == MultiwordPolicy::First && found > 0) continue;
    for (std::size_t k = 0; k < space.dim(); ++k) sum[k] += (*v)[k];
    ++found;
  }
  if (found == 0) return std::nullopt;
  term.synthetic = true;
  term.vector.resize(space.dim());
  for (std::size_t k = 0; k < space.dim(); ++k) term.vector[k] = static_cast<float>(sum[k] / static_cast<double>(found));
  return term;
}

inline EmbeddedTerm embed_term(const VectorSpace& space, std::string_view surface,
                               MultiwordPolicy policy = MultiwordPolicy::Average) {
  if (auto t = try_embed_term(space, surface, policy)) return std::move(*t);
  throw Error(ErrorKind::Unembeddable, "no component of '" + std::string(surface) + "' is in the vector space");
}

// ---------------------------------------------------------------------------
// Geometry

inline double cosine(VectorView u, VectorView v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::DimMismatch, "cosine of " + std::to_string(u.size()) + "-d and " + std::to_string(v.size()) +
                                            "-d vectors");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i], b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) throw Error(ErrorKind::ZeroVector, "cosine of a zero vector");
  return std::clamp(dot / std::sqrt(uu * vv), -1.0, 1.0);
}

struct Neighbor {
  std::string token;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

// Exact top-k by cosine over the whole space. Ties go to the lexicographically
// smaller token; rows with a zero vector are never returned.
inline std::vector<Neighbor> nearest(const VectorSpace& space, VectorView query, std::size_t k,
                                     const std::unordered_set<std::string>& exclude = {}) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  if (query.size() != space.dim()) throw Error(ErrorKind::DimMismatch, "query dimension differs from space");
  double qq = 0.0;
  for (const float x : query) qq += static_cast<double>(x) * static_cast<double>(x);
  if (qq == 0.0) throw Error(ErrorKind::ZeroVector, "nearest() query is a zero vector");

  std::unordered_set<std::string> excluded;
  for (const auto& e : exclude) excluded.insert(space.normalize(e));

  struct Hit {
    double sim;
    std::size_t row;
  };
  // "a ranks before b"
  auto better = [&](const Hit& a, const Hit& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    return space.token(a.row) < space.token(b.row);
  };
  // Max-heap on "worse", so top() is the weakest kept hit.
  std::priority_queue<Hit, std::vector<Hit>, decltype(better)> heap(better);

  const std::size_t dim = space.dim();
  for (std::size_t r = 0; r < space.size(); ++r) {
    const double rr = space.norm_squared(r);
    if (rr == 0.0) continue;
    const auto row = space.row(r);
    double dot = 0.0;
    for (std::size_t i = 0; i < dim; ++i) dot += static_cast<double>(query[i]) * static_cast<double>(row[i]);
    // Same operation order as cosine(), so results match it bit for bit.
    const Hit hit{std::clamp(dot / std::sqrt(qq * rr), -1.0, 1.0), r};
    if (heap.size() < k) {
      if (!excluded.empty() && excluded.contains(space.token(r))) continue;
      heap.push(hit);
    } else if (better(hit, heap.top())) {
      if (!excluded.empty() && excluded.contains(space.token(r))) continue;
      heap.pop();
      heap.push(hit);
    }
  }

  std::vector<Hit> hits;
  hits.reserve(heap.size());
  while (!heap.empty()) {
    hits.push_back(heap.top());
    heap.pop();
  }
  std::sort(hits.begin(), hits.end(), better);
  std::vector<Neighbor> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back({space.token(h.row), h.sim});
  return out;
}

// Weighted arithmetic mean; no weights means uniform.
inline Vector centroid(std::span<const VectorView> vectors, std::span<const double> weights = {}) {
  if (vectors.empty()) throw Error(ErrorKind::EmptyInput, "centroid of no vectors");
  if (!weights.empty() && weights.size() != vectors.size()) {
    throw Error(ErrorKind::InvalidArgument, "weights and vectors differ in length");
  }
  const std::size_t dim = vectors.front().size();
  std::vector<double> sum(dim, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) throw Error(ErrorKind::DimMismatch, "centroid inputs differ in dimension");
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "weights must be finite and >= 0");
    if (w == 0.0) continue;
    total += w;
    for (std::size_t k = 0; k < dim; ++k) sum[k] += w * static_cast<double>(vectors[i][k]);
  }
  if (total <= 0.0) throw Error(ErrorKind::ZeroWeightSum, "centroid weights sum to zero");
  Vector out(dim);
  for (std::size_t k = 0; k < dim; ++k) out[k] = static_cast<float>(sum[k] / total);
  return out;
}

inline Vector centroid(const std::vector<Vector>& vectors, const std::vector<double>& weights = {}) {
  std::vector<VectorView> views(vectors.begin(), vectors.end());
  return centroid(std::span<const VectorView>(views), std::span<const double>(weights));
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Projection {
  std::vector<Point2> points;
  std::vector<double> axis1;  // unit loading vectors
  std::vector<double> axis2;
  double variance1 = 0.0;
  double variance2 = 0.0;
};

struct PcaOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 10000;
};

namespace detail {

// Dense centered data, row-major n x d.
struct Centered {
  std::size_t n = 0, d = 0;
  std::vector<double> x;

  double dot_row(std::size_t r, const std::vector<double>& v) const {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += x[r * d + k] * v[k];
    return s;
  }

  // (X^T X / (n - 1)) v
  std::vector<double> covariance_times(const std::vector<double>& v) const {
    std::vector<double> out(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const double s = dot_row(r, v);
      for (std::size_t k = 0; k < d; ++k) out[k] += s * x[r * d + k];
    }
    const double scale = 1.0 / static_cast<double>(n - 1);
    for (auto& o : out) o *= scale;
    return out;
  }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double normalize_in_place(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  if (n > 0.0) {
    for (auto& x : v) x /= n;
  }
  return n;
}

inline void remove_component(std::vector<double>& v, const std::vector<double>& unit) {
  const double c = dot(v, unit);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * unit[k];
}

// Largest-magnitude loading positive (first such index on ties).
inline void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (std::abs(v[k]) > std::abs(v[best])) best = k;
  }
  if (!v.empty() && v[best] < 0.0) {
    for (auto& x : v) x = -x;
  }
}

// Power iteration for the dominant eigenvector of the covariance restricted to
// the complement of `against` (deflation by projection). Returns the
// eigenvalue estimate; zero means the restricted covariance vanishes.
inline double power_iterate(const Centered& data, std::vector<double>& v, const std::vector<double>* against,
                            const PcaOptions& opt) {
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    auto w = data.covariance_times(v);
    if (against) remove_component(w, *against);
    const double lambda = normalize_in_place(w);
    if (lambda == 0.0) return 0.0;
    double diff = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) diff += (w[k] - v[k]) * (w[k] - v[k]);
    v = std::move(w);
    if (std::sqrt(diff) < opt.tolerance) break;
  }
  const auto cv = data.covariance_times(v);
  return dot(v, cv);
}

// Start vector: the centered row with the largest norm outside `against`.
inline std::vector<double> start_vector(const Centered& data, const std::vector<double>* against) {
  std::vector<double> best;
  double best_norm = 0.0;
  for (std::size_t r = 0; r < data.n; ++r) {
    std::vector<double> v(data.x.begin() + static_cast<std::ptrdiff_t>(r * data.d),
                          data.x.begin() + static_cast<std::ptrdiff_t>((r + 1) * data.d));
    if (against) remove_component(v, *against);
    const double n = std::sqrt(dot(v, v));
    if (n > best_norm) {
      best_norm = n;
      best = std::move(v);
    }
  }
  if (!best.empty()) normalize_in_place(best);
  return best;
}

}  // namespace detail

// Centers the rows and projects them onto the top two principal directions,
// found by power iteration with deflation and finished with a 2x2
// Rayleigh-Ritz rotation so the projected coordinates are uncorrelated.
inline Projection pca_2d(std::span<const VectorView> vectors, const PcaOptions& opt = {}) {
  if (vectors.size() < 2) throw Error(ErrorKind::DegenerateData, "PCA needs at least two vectors");
  detail::Centered data;
  data.n = vectors.size();
  data.d = vectors.front().size();
  if (data.d == 0) throw Error(ErrorKind::DegenerateData, "zero-dimensional vectors");
  std::vector<double> mean(data.d, 0.0);
  double raw_scale = 0.0;
  for (const auto& v : vectors) {
    if (v.size() != data.d) throw Error(ErrorKind::DimMismatch, "PCA inputs differ in dimension");
    for (std::size_t k = 0; k < data.d; ++k) {
      mean[k] += v[k];
      raw_scale = std::max(raw_scale, std::abs(static_cast<double>(v[k])));
    }
  }
  for (auto& m : mean) m /= static_cast<double>(data.n);
  data.x.resize(data.n * data.d);
  double spread = 0.0;
  for (std::size_t r = 0; r < data.n; ++r) {
    for (std::size_t k = 0; k < data.d; ++k) {
      const double c = static_cast<double>(vectors[r][k]) - mean[k];
      data.x[r * data.d + k] = c;
      spread = std::max(spread, std::abs(c));
    }
  }
  if (spread <= 1e-12 * std::max(raw_scale, 1e-300)) {
    throw Error(ErrorKind::DegenerateData, "all vectors coincide; no variance to project");
  }

  Projection p;
  auto v1 = detail::start_vector(data, nullptr);
  double l1 = detail::power_iterate(data, v1, nullptr, opt);

  std::vector<double> v2;
  double l2 = 0.0;
  auto s2 = detail::start_vector(data, &v1);
  if (!s2.empty() && data.d > 1) {
    v2 = std::move(s2);
    l2 = detail::power_iterate(data, v2, &v1, opt);
    detail::remove_component(v2, v1);
    detail::normalize_in_place(v2);
  }
  if (v2.empty() && data.d > 1) {
    // Rank one: any unit direction orthogonal to v1 yields all-zero y.
    std::size_t smallest = 0;
    for (std::size_t k = 1; k < data.d; ++k) {
      if (std::abs(v1[k]) < std::abs(v1[smallest])) smallest = k;
    }
    v2.assign(data.d, 0.0);
    v2[smallest] = 1.0;
    detail::remove_component(v2, v1);
    detail::normalize_in_place(v2);
    l2 = 0.0;
  }

  if (!v2.empty()) {
    // Rayleigh-Ritz on span{v1, v2}.
    const auto c1 = data.covariance_times(v1);
    const auto c2 = data.covariance_times(v2);
    const double a = detail::dot(v1, c1), b = detail::dot(v1, c2), c = detail::dot(v2, c2);
    if (b != 0.0) {
      const double theta = 0.5 * std::atan2(2.0 * b, a - c);
      const double cs = std::cos(theta), sn = std::sin(theta);
      std::vector<double> r1(data.d), r2(data.d);
      for (std::size_t k = 0; k < data.d; ++k) {
        r1[k] = cs * v1[k] + sn * v2[k];
        r2[k] = -sn * v1[k] + cs * v2[k];
      }
      v1 = std::move(r1);
      v2 = std::move(r2);
    }
    l1 = detail::dot(v1, data.covariance_times(v1));
    l2 = detail::dot(v2, data.covariance_times(v2));
    detail::fix_sign(v2);
  }
  detail::fix_sign(v1);

  p.points.resize(data.n);
  for (std::size_t r = 0; r < data.n; ++r) {
    p.points[r].x = data.dot_row(r, v1);
    p.points[r].y = v2.empty() ? 0.0 : data.dot_row(r, v2);
  }
  p.axis1 = std::move(v1);
  p.axis2 = std::move(v2);
  p.variance1 = l1;
  p.variance2 = l2;
  return p;
}

inline Projection pca_2d(const std::vector<Vector>& vectors, const PcaOptions& opt = {}) {
  std::vector<VectorView> views(vectors.begin(), vectors.end());
  return pca_2d(std::span<const VectorView>(views), opt);
}

}  // namespace pfp::vsm
