#pragma once

// Group presentations, finite connected 2-complexes and their mod-p
// cellular (co)homology.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdescent/errors.hpp"
#include "pdescent/fp_linalg.hpp"

namespace pdescent {

/// One traversal of an oriented 1-cell; dir is +1 along, -1 against.
struct Step {
  std::size_t edge = 0;
  int dir = 1;
  friend bool operator==(const Step&, const Step&) = default;
};

struct EdgePath {
  std::size_t start = 0;
  std::vector<Step> steps;
  friend bool operator==(const EdgePath&, const EdgePath&) = default;
};

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Generators are single lowercase letters; the uppercase letter is the
/// inverse. Relators are kept verbatim, without free or cyclic reduction.
class GroupPresentation {
 public:
  GroupPresentation(std::vector<char> generators, std::vector<std::string> relators)
      : generators_(std::move(generators)), relators_(std::move(relators)) {
    if (generators_.empty()) throw ParseError("presentation needs at least one generator");
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      const char g = generators_[i];
      if (!std::islower(static_cast<unsigned char>(g))) throw ParseError(std::string("generator '") + g + "' is not a lowercase letter");
      if (std::find(generators_.begin(), generators_.begin() + static_cast<std::ptrdiff_t>(i), g) != generators_.begin() + static_cast<std::ptrdiff_t>(i))
        throw ParseError(std::string("duplicate generator '") + g + "'");
    }
    for (const auto& r : relators_) (void)spell(r);
  }

  const std::vector<char>& generators() const noexcept { return generators_; }
  const std::vector<std::string>& relators() const noexcept { return relators_; }
  std::size_t relator_count() const noexcept { return relators_.size(); }

  /// Letter -> (generator index, +1/-1).
  Step letter(char ch) const {
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    auto it = std::find(generators_.begin(), generators_.end(), lower);
    if (!std::isalpha(static_cast<unsigned char>(ch)) || it == generators_.end())
      throw ParseError(std::string("unknown symbol '") + ch + "'");
    return {static_cast<std::size_t>(it - generators_.begin()), std::isupper(static_cast<unsigned char>(ch)) ? -1 : 1};
  }

  std::vector<Step> spell(const std::string& word) const {
    std::vector<Step> out;
    out.reserve(word.size());
    for (char ch : word) out.push_back(letter(ch));
    return out;
  }

  friend bool operator==(const GroupPresentation&, const GroupPresentation&) = default;

 private:
  std::vector<char> generators_;
  std::vector<std::string> relators_;
};

/// Finite connected 2-complex. The constructor validates incidence,
/// closedness of attaching paths and connectivity, and fixes a BFS spanning
/// tree rooted at the basepoint (edges explored in index order).
class TwoComplex {
 public:
  TwoComplex(std::size_t vertex_count, std::vector<Edge> edges, std::vector<EdgePath> faces, std::size_t basepoint = 0)
      : vertex_count_(vertex_count), edges_(std::move(edges)), faces_(std::move(faces)), basepoint_(basepoint) {
    if (vertex_count_ == 0) throw Error("complex has no vertices");
    if (basepoint_ >= vertex_count_) throw Error("basepoint is not a vertex");
    incident_.assign(vertex_count_, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& ed = edges_[e];
      if (ed.from >= vertex_count_ || ed.to >= vertex_count_) throw Error("edge endpoint out of range");
      incident_[ed.from].push_back(e);
      if (ed.to != ed.from) incident_[ed.to].push_back(e);
    }
    for (std::size_t f = 0; f < faces_.size(); ++f)
      if (end_vertex(faces_[f]) != faces_[f].start) throw InvalidPathError("attaching path of face " + std::to_string(f) + " is not closed");
    build_tree();
  }

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t face_count() const noexcept { return faces_.size(); }
  std::size_t cell_count() const noexcept { return vertex_count_ + edges_.size() + faces_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<EdgePath>& faces() const noexcept { return faces_; }
  const EdgePath& face(std::size_t f) const { return faces_.at(f); }
  std::size_t basepoint() const noexcept { return basepoint_; }
  const std::vector<std::size_t>& incident_edges(std::size_t v) const { return incident_.at(v); }

  std::int64_t euler_characteristic() const noexcept {
    return static_cast<std::int64_t>(vertex_count_) - static_cast<std::int64_t>(edges_.size()) +
           static_cast<std::int64_t>(faces_.size());
  }

  bool in_tree(std::size_t e) const { return in_tree_.at(e) != 0; }
  const std::vector<std::size_t>& tree_edges() const noexcept { return tree_edges_; }
  const std::vector<std::size_t>& non_tree_edges() const noexcept { return non_tree_edges_; }
  /// Vertices in BFS discovery order; the basepoint comes first.
  const std::vector<std::size_t>& bfs_order() const noexcept { return bfs_order_; }
  /// The tree step entering v from its parent (undefined for the basepoint).
  Step parent_step(std::size_t v) const { return parent_step_.at(v); }

  /// Vertex reached by walking the path; throws on a non-incident step.
  std::size_t end_vertex(const EdgePath& path) const {
    if (path.start >= vertex_count_) throw InvalidPathError("path starts outside the complex");
    std::size_t at = path.start;
    for (std::size_t i = 0; i < path.steps.size(); ++i) {
      const auto& s = path.steps[i];
      if (s.edge >= edges_.size() || (s.dir != 1 && s.dir != -1)) throw InvalidPathError("step " + std::to_string(i) + " is malformed");
      const auto& ed = edges_[s.edge];
      const std::size_t tail = s.dir > 0 ? ed.from : ed.to;
      if (tail != at) throw InvalidPathError("step " + std::to_string(i) + " is not incident to the current vertex");
      at = s.dir > 0 ? ed.to : ed.from;
    }
    return at;
  }

  bool is_closed(const EdgePath& path) const { return end_vertex(path) == path.start; }

  /// Tree path from the basepoint to v.
  EdgePath tree_path(std::size_t v) const {
    EdgePath out{basepoint_, {}};
    while (v != basepoint_) {
      const Step s = parent_step_[v];
      out.steps.push_back(s);
      v = s.dir > 0 ? edges_[s.edge].from : edges_[s.edge].to;
    }
    std::reverse(out.steps.begin(), out.steps.end());
    return out;
  }

  /// Based loop: tree path to the tail of e, then e, then back through the tree.
  EdgePath fundamental_loop(std::size_t e) const {
    EdgePath out = tree_path(edges_.at(e).from);
    out.steps.push_back({e, 1});
    auto back = reversed(tree_path(edges_[e].to));
    out.steps.insert(out.steps.end(), back.steps.begin(), back.steps.end());
    return out;
  }

  EdgePath reversed(const EdgePath& path) const {
    EdgePath out{end_vertex(path), {}};
    for (auto it = path.steps.rbegin(); it != path.steps.rend(); ++it) out.steps.push_back({it->edge, -it->dir});
    return out;
  }

 private:
  void build_tree() {
    in_tree_.assign(edges_.size(), 0);
    parent_step_.assign(vertex_count_, Step{});
    std::vector<char> seen(vertex_count_, 0);
    std::deque<std::size_t> queue{basepoint_};
    seen[basepoint_] = 1;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      bfs_order_.push_back(v);
      for (std::size_t e : incident_[v]) {
        const auto& ed = edges_[e];
        const std::size_t w = ed.from == v ? ed.to : ed.from;
        if (seen[w]) continue;
        seen[w] = 1;
        in_tree_[e] = 1;
        parent_step_[w] = {e, ed.from == v ? 1 : -1};
        queue.push_back(w);
      }
    }
    if (bfs_order_.size() != vertex_count_) throw Error("1-skeleton is not connected");
    for (std::size_t e = 0; e < edges_.size(); ++e) (in_tree_[e] ? tree_edges_ : non_tree_edges_).push_back(e);
  }

  std::size_t vertex_count_;
  std::vector<Edge> edges_;
  std::vector<EdgePath> faces_;
  std::size_t basepoint_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<char> in_tree_;
  std::vector<Step> parent_step_;
  std::vector<std::size_t> bfs_order_;
  std::vector<std::size_t> tree_edges_;
  std::vector<std::size_t> non_tree_edges_;
};

/// One vertex, a loop per generator, a face per relator spelling it.
inline TwoComplex build_presentation_complex(const GroupPresentation& pres) {
  std::vector<Edge> edges(pres.generators().size(), Edge{0, 0});
  std::vector<EdgePath> faces;
  faces.reserve(pres.relator_count());
  for (const auto& r : pres.relators()) faces.push_back({0, pres.spell(r)});
  return TwoComplex(1, std::move(edges), std::move(faces), 0);
}

/// An F_p-valued 1-cochain: one value per oriented edge.
struct Cochain {
  FpVector values;
  friend bool operator==(const Cochain&, const Cochain&) = default;
};

/// Cochain with a single 1 on edge e.
inline Cochain indicator_cochain(const TwoComplex& k, std::size_t e) {
  Cochain c{FpVector(k.edge_count(), 0)};
  c.values.at(e) = 1;
  return c;
}

inline std::vector<std::size_t> cochain_support(const Cochain& c) {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < c.values.size(); ++e)
    if (c.values[e]) out.push_back(e);
  return out;
}

inline Residue evaluate_on_path(const TwoComplex& k, const Cochain& c, const EdgePath& path, const PrimeModulus& p) {
  if (c.values.size() != k.edge_count()) throw DimensionError("cochain does not match the complex");
  (void)k.end_vertex(path);
  Residue acc = 0;
  for (const auto& s : path.steps) acc = s.dir > 0 ? p.add(acc, c.values[s.edge]) : p.sub(acc, c.values[s.edge]);
  return acc;
}

/// First face whose boundary has nonzero evaluation, if any.
inline std::optional<std::size_t> first_violated_face(const TwoComplex& k, const Cochain& c, const PrimeModulus& p) {
  for (std::size_t f = 0; f < k.face_count(); ++f)
    if (evaluate_on_path(k, c, k.face(f), p) != 0) return f;
  return std::nullopt;
}

inline bool is_cocycle(const TwoComplex& k, const Cochain& c, const PrimeModulus& p) {
  return !first_violated_face(k, c, p).has_value();
}

/// delta f(e) = f(to) - f(from).
inline Cochain coboundary(const TwoComplex& k, std::span<const Residue> potential, const PrimeModulus& p) {
  if (potential.size() != k.vertex_count()) throw DimensionError("potential does not match the vertex count");
  Cochain c{FpVector(k.edge_count())};
  for (std::size_t e = 0; e < k.edge_count(); ++e) c.values[e] = p.sub(potential[k.edge(e).to], potential[k.edge(e).from]);
  return c;
}

/// Cellular boundary d1: C_1 -> C_0 as a |V| x |E| matrix.
inline FpMatrix boundary1(const TwoComplex& k, const PrimeModulus& p) {
  FpMatrix m(k.vertex_count(), k.edge_count());
  for (std::size_t e = 0; e < k.edge_count(); ++e) {
    const auto& ed = k.edge(e);
    m(ed.to, e) = p.add(m(ed.to, e), 1);
    m(ed.from, e) = p.sub(m(ed.from, e), 1);
  }
  return m;
}

/// Cellular boundary d2: C_2 -> C_1 as a |E| x |F| matrix.
inline FpMatrix boundary2(const TwoComplex& k, const PrimeModulus& p) {
  FpMatrix m(k.edge_count(), k.face_count());
  for (std::size_t f = 0; f < k.face_count(); ++f)
    for (const auto& s : k.face(f).steps) m(s.edge, f) = s.dir > 0 ? p.add(m(s.edge, f), 1) : p.sub(m(s.edge, f), 1);
  return m;
}

/// dim H_1(K; F_p) = dim ker d1 - rank d2.
inline std::size_t homology_dim_p(const TwoComplex& k, const PrimeModulus& p) {
  const std::size_t r1 = rank_of(boundary1(k, p), p);
  const std::size_t r2 = rank_of(boundary2(k, p), p);
  return k.edge_count() - r1 - r2;
}

/// Z^1: cochains vanishing on every face boundary.
inline FpSubspace cocycle_space(const TwoComplex& k, const PrimeModulus& p) {
  return kernel_basis(boundary2(k, p).transposed(), p);
}

/// B^1: coboundaries of vertex potentials.
inline FpSubspace coboundary_space(const TwoComplex& k, const PrimeModulus& p) {
  return FpSubspace::span(boundary1(k, p), p);
}

/// The representative of c's class that vanishes on the spanning tree:
/// c - delta(phi) where phi integrates c along tree paths.
inline Cochain tree_normalized(const TwoComplex& k, const Cochain& c, const PrimeModulus& p) {
  if (c.values.size() != k.edge_count()) throw DimensionError("cochain does not match the complex");
  FpVector phi(k.vertex_count(), 0);
  for (std::size_t v : k.bfs_order()) {
    if (v == k.basepoint()) continue;
    const Step s = k.parent_step(v);
    const auto& ed = k.edge(s.edge);
    phi[v] = s.dir > 0 ? p.add(phi[ed.from], c.values[s.edge]) : p.sub(phi[ed.to], c.values[s.edge]);
  }
  Cochain out{FpVector(k.edge_count())};
  for (std::size_t e = 0; e < k.edge_count(); ++e)
    out.values[e] = p.sub(p.add(phi[k.edge(e).from], c.values[e]), phi[k.edge(e).to]);
  return out;
}

/// Evaluations of c on the fundamental loops (non-tree edges, index order).
/// For cocycles this is a coordinate vector of the cohomology class.
inline FpVector class_coordinates(const TwoComplex& k, const Cochain& c, const PrimeModulus& p) {
  const Cochain n = tree_normalized(k, c, p);
  FpVector out;
  out.reserve(k.non_tree_edges().size());
  for (std::size_t e : k.non_tree_edges()) out.push_back(n.values[e]);
  return out;
}

inline FpMatrix class_matrix(const TwoComplex& k, const std::vector<Cochain>& classes, const PrimeModulus& p) {
  FpMatrix m(0, k.non_tree_edges().size());
  for (const auto& c : classes) m.append_row(class_coordinates(k, c, p));
  return m;
}

/// Cocycles whose classes form a basis of H^1(K; F_p). Each vanishes on the
/// spanning tree; their restrictions to the non-tree edges are the echelon
/// basis of the kernel of the face-evaluation system.
inline std::vector<Cochain> h1_cocycle_basis(const TwoComplex& k, const PrimeModulus& p) {
  const auto& nt = k.non_tree_edges();
  std::vector<std::size_t> column(k.edge_count(), SIZE_MAX);
  for (std::size_t i = 0; i < nt.size(); ++i) column[nt[i]] = i;
  FpMatrix system(k.face_count(), nt.size());
  for (std::size_t f = 0; f < k.face_count(); ++f)
    for (const auto& s : k.face(f).steps) {
      const std::size_t col = column[s.edge];
      if (col == SIZE_MAX) continue;
      system(f, col) = s.dir > 0 ? p.add(system(f, col), 1) : p.sub(system(f, col), 1);
    }
  const auto kernel = kernel_basis(system, p);
  std::vector<Cochain> out;
  out.reserve(kernel.dim());
  for (std::size_t r = 0; r < kernel.dim(); ++r) {
    Cochain c{FpVector(k.edge_count(), 0)};
    for (std::size_t i = 0; i < nt.size(); ++i) c.values[nt[i]] = kernel.basis()(r, i);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace pdescent
