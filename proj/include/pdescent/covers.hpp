#pragma once

// Finite regular covers of 2-complexes with abelian deck group: elementary
// abelian p-covers built from cocycle tuples, and cyclic covers built from an
// integer-valued cocycle.
//
// Cells of the total complex are indexed lexicographically by
// (base cell, deck label): index = base_index * degree + label_index, where
// the label index reads the label digits as a mixed-radix number with the
// first digit most significant. The initial vertex of lifted edge
// (e, L) is (from(e), L).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdescent/complex.hpp"
#include "pdescent/errors.hpp"
#include "pdescent/fp_linalg.hpp"

namespace pdescent {

enum class DeckKind { elementary_abelian, cyclic };

class CoveringMap {
 public:
  const TwoComplex& base() const noexcept { return *base_; }
  const TwoComplex& total() const noexcept { return *total_; }
  std::shared_ptr<const TwoComplex> base_ptr() const noexcept { return base_; }
  std::shared_ptr<const TwoComplex> total_ptr() const noexcept { return total_; }

  std::size_t degree() const noexcept { return degree_; }
  DeckKind deck_kind() const noexcept { return kind_; }
  /// Radix of every label digit: p for abelian covers, i for cyclic ones.
  std::uint32_t deck_modulus() const noexcept { return digit_modulus_; }
  std::size_t deck_rank() const noexcept { return digits_; }
  /// The cocycles the cover was built from (abelian covers only).
  const std::vector<Cochain>& classes() const noexcept { return classes_; }

  std::size_t vertex_projection(std::size_t v) const { return v / degree_; }
  std::size_t edge_projection(std::size_t e) const { return e / degree_; }
  std::size_t face_projection(std::size_t f) const { return f / degree_; }
  std::size_t label_index(std::size_t total_vertex) const { return total_vertex % degree_; }
  const FpVector& deck_label(std::size_t total_vertex) const { return deck_labels_.at(total_vertex); }

  std::vector<std::size_t> vertex_fiber(std::size_t base_vertex) const {
    std::vector<std::size_t> out(degree_);
    std::iota(out.begin(), out.end(), base_vertex * degree_);
    return out;
  }

  std::size_t total_vertex(std::size_t base_vertex, std::size_t label) const { return base_vertex * degree_ + label; }
  std::size_t basepoint_lift() const noexcept { return total_vertex(base_->basepoint(), 0); }

  /// Label of `label` translated by the shift of base edge e (sign = +1/-1).
  std::size_t shifted_label(std::size_t label, std::size_t base_edge, int sign) const {
    const auto& s = shifts_[base_edge];
    std::size_t out = 0;
    std::size_t place = degree_;
    for (std::size_t k = 0; k < digits_; ++k) {
      place /= digit_modulus_;
      const std::uint64_t digit = (label / place) % digit_modulus_;
      const std::uint64_t moved = sign > 0 ? (digit + s[k]) % digit_modulus_ : (digit + digit_modulus_ - s[k]) % digit_modulus_;
      out += static_cast<std::size_t>(moved) * place;
    }
    return out;
  }

  /// Lift of a base path starting at the given total vertex.
  EdgePath lift_path(const EdgePath& base_path, std::size_t start) const {
    if (vertex_projection(start) != base_path.start) throw InvalidPathError("lift does not start over the path's start");
    (void)base_->end_vertex(base_path);
    EdgePath out{start, {}};
    out.steps.reserve(base_path.steps.size());
    std::size_t label = label_index(start);
    for (const auto& s : base_path.steps) {
      if (s.dir > 0) {
        out.steps.push_back({s.edge * degree_ + label, 1});
        label = shifted_label(label, s.edge, 1);
      } else {
        label = shifted_label(label, s.edge, -1);
        out.steps.push_back({s.edge * degree_ + label, -1});
      }
    }
    return out;
  }

  EdgePath project_path(const EdgePath& total_path) const {
    EdgePath out{vertex_projection(total_path.start), {}};
    for (const auto& s : total_path.steps) out.steps.push_back({edge_projection(s.edge), s.dir});
    return out;
  }

  /// Pullback c~(e) = c(q(e)).
  Cochain pullback(const Cochain& c) const {
    if (c.values.size() != base_->edge_count()) throw DimensionError("cochain does not match the base complex");
    Cochain out{FpVector(total_->edge_count())};
    for (std::size_t e = 0; e < out.values.size(); ++e) out.values[e] = c.values[edge_projection(e)];
    return out;
  }

  /// Wraps an existing complex as its own degree-1 cover.
  static CoveringMap identity(std::shared_ptr<const TwoComplex> k, std::uint32_t p) {
    std::vector<FpVector> zero(k->edge_count());
    return build(k, DeckKind::elementary_abelian, p, 0, std::move(zero), {});
  }

  /// Generic construction; shifts[e] holds one digit per deck coordinate.
  static CoveringMap build(std::shared_ptr<const TwoComplex> base, DeckKind kind, std::uint32_t digit_modulus,
                           std::size_t digits, std::vector<FpVector> shifts, std::vector<Cochain> classes) {
    CoveringMap cov;
    cov.base_ = std::move(base);
    cov.kind_ = kind;
    cov.digit_modulus_ = digit_modulus;
    cov.digits_ = digits;
    cov.shifts_ = std::move(shifts);
    cov.classes_ = std::move(classes);
    cov.degree_ = 1;
    for (std::size_t k = 0; k < digits; ++k) cov.degree_ *= digit_modulus;
    const auto& b = *cov.base_;
    const std::size_t d = cov.degree_;

    std::vector<Edge> edges;
    edges.reserve(b.edge_count() * d);
    for (std::size_t e = 0; e < b.edge_count(); ++e)
      for (std::size_t l = 0; l < d; ++l)
        edges.push_back({cov.total_vertex(b.edge(e).from, l), cov.total_vertex(b.edge(e).to, cov.shifted_label(l, e, 1))});

    std::vector<EdgePath> faces;
    faces.reserve(b.face_count() * d);
    for (std::size_t f = 0; f < b.face_count(); ++f)
      for (std::size_t l = 0; l < d; ++l) faces.push_back(cov.lift_path(b.face(f), cov.total_vertex(b.face(f).start, l)));

    cov.total_ = std::make_shared<const TwoComplex>(b.vertex_count() * d, std::move(edges), std::move(faces),
                                                    cov.total_vertex(b.basepoint(), 0));
    cov.deck_labels_.reserve(b.vertex_count() * d);
    for (std::size_t v = 0; v < b.vertex_count(); ++v)
      for (std::size_t l = 0; l < d; ++l) {
        FpVector digit(digits);
        std::size_t rest = l;
        for (std::size_t k = digits; k-- > 0;) {
          digit[k] = static_cast<Residue>(rest % digit_modulus);
          rest /= digit_modulus;
        }
        cov.deck_labels_.push_back(std::move(digit));
      }
    return cov;
  }

 private:
  CoveringMap() = default;

  std::shared_ptr<const TwoComplex> base_;
  std::shared_ptr<const TwoComplex> total_;
  DeckKind kind_ = DeckKind::elementary_abelian;
  std::uint32_t digit_modulus_ = 2;
  std::size_t digits_ = 0;
  std::size_t degree_ = 1;
  std::vector<FpVector> shifts_;
  std::vector<Cochain> classes_;
  std::vector<FpVector> deck_labels_;
};

/// Cover with deck group F_p^n whose edge e: u -> v lifts to
/// (u, a) -> (v, a + (c_1(e), ..., c_n(e))).
inline CoveringMap build_abelian_p_cover(std::shared_ptr<const TwoComplex> k, const std::vector<Cochain>& classes,
                                         const PrimeModulus& p) {
  for (std::size_t j = 0; j < classes.size(); ++j) {
    if (classes[j].values.size() != k->edge_count()) throw DimensionError("class " + std::to_string(j) + " does not match the complex");
    if (auto f = first_violated_face(*k, classes[j], p))
      throw CocycleConditionError("class " + std::to_string(j) + " is not a cocycle (face " + std::to_string(*f) + ")", *f);
  }
  const FpMatrix coords = class_matrix(*k, classes, p);
  if (rank_of(coords, p) < classes.size()) {
    const auto relation = kernel_basis(coords.transposed(), p);
    throw DisconnectedCoverError("covering classes are dependent in H^1; the cover would be disconnected",
                                 relation.basis().row_vector(0));
  }
  if (!checked_pow(p.value(), classes.size(), std::uint64_t{1} << 40)) throw DimensionError("cover degree overflows");
  std::vector<FpVector> shifts(k->edge_count(), FpVector(classes.size()));
  for (std::size_t e = 0; e < k->edge_count(); ++e)
    for (std::size_t j = 0; j < classes.size(); ++j) shifts[e][j] = classes[j].values[e];
  return CoveringMap::build(std::move(k), DeckKind::elementary_abelian, p.value(), classes.size(), std::move(shifts), classes);
}

/// The i-fold cyclic cover determined by an integer cocycle.
inline CoveringMap build_cyclic_cover(std::shared_ptr<const TwoComplex> k, const std::vector<std::int64_t>& weights,
                                      std::size_t i) {
  if (weights.size() != k->edge_count()) throw DimensionError("weights do not match the complex");
  if (i == 0) throw DimensionError("cyclic cover needs i >= 1");
  for (std::size_t f = 0; f < k->face_count(); ++f) {
    std::int64_t sum = 0;
    for (const auto& s : k->face(f).steps) sum += s.dir * weights[s.edge];
    if (sum != 0) throw CocycleConditionError("weights do not vanish on face " + std::to_string(f), f);
  }
  // integer potential along the tree; loop evaluations are the normalized values
  std::vector<std::int64_t> phi(k->vertex_count(), 0);
  for (std::size_t v : k->bfs_order()) {
    if (v == k->basepoint()) continue;
    const Step s = k->parent_step(v);
    const auto& ed = k->edge(s.edge);
    phi[v] = s.dir > 0 ? phi[ed.from] + weights[s.edge] : phi[ed.to] - weights[s.edge];
  }
  std::int64_t g = static_cast<std::int64_t>(i);
  for (std::size_t e : k->non_tree_edges()) g = std::gcd(g, phi[k->edge(e).from] + weights[e] - phi[k->edge(e).to]);
  if (g != 1)
    throw DisconnectedCoverError("loop evaluations share the divisor " + std::to_string(g) + " with i; the cover would be disconnected",
                                 {static_cast<std::uint32_t>(g)});
  const auto m = static_cast<std::int64_t>(i);
  std::vector<FpVector> shifts(k->edge_count(), FpVector(i > 1 ? 1 : 0));
  if (i > 1)
    for (std::size_t e = 0; e < k->edge_count(); ++e) shifts[e][0] = static_cast<Residue>(((weights[e] % m) + m) % m);
  return CoveringMap::build(std::move(k), DeckKind::cyclic, static_cast<std::uint32_t>(i), i > 1 ? 1 : 0, std::move(shifts), {});
}

/// c-values of the total vertices: the evaluation of c along the projection
/// of any path from the basepoint lift. Throws with a witness edge when some
/// loop of the total complex has nonzero evaluation.
inline FpVector c_value_table(const CoveringMap& cov, const Cochain& c, const PrimeModulus& p) {
  const auto& t = cov.total();
  if (c.values.size() != cov.base().edge_count()) throw DimensionError("cochain does not match the base complex");
  FpVector value(t.vertex_count(), 0);
  for (std::size_t v : t.bfs_order()) {
    if (v == t.basepoint()) continue;
    const Step s = t.parent_step(v);
    const auto& ed = t.edge(s.edge);
    const Residue step = c.values[cov.edge_projection(s.edge)];
    value[v] = s.dir > 0 ? p.add(value[ed.from], step) : p.sub(value[ed.to], step);
  }
  for (std::size_t e : t.non_tree_edges()) {
    const auto& ed = t.edge(e);
    if (p.add(value[ed.from], c.values[cov.edge_projection(e)]) != value[ed.to])
      throw NotConstantOnFiberError("c-value is ill-defined: nonzero on the fundamental loop of total edge " + std::to_string(e), e);
  }
  return value;
}

/// One total face per deck orbit: the lift with label 0 of each base face.
inline std::vector<std::size_t> deck_orbit_representatives(const CoveringMap& cov) {
  std::vector<std::size_t> out(cov.base().face_count());
  for (std::size_t f = 0; f < out.size(); ++f) out[f] = f * cov.degree();
  return out;
}

/// Upper bound on d_p of a normal subgroup of p-power index.
inline std::int64_t index_dp_bound(std::size_t base_dp, std::size_t degree) {
  return (static_cast<std::int64_t>(base_dp) - 1) * static_cast<std::int64_t>(degree) + 1;
}

}  // namespace pdescent
