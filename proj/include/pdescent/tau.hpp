#pragma once

// Relative size of cohomology classes, Cheeger constants of 1-skeleta, and
// the inequality linking them on a cover whose fundamental group lies in the
// kernel of the class.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pdescent/complex.hpp"
#include "pdescent/covers.hpp"
#include "pdescent/errors.hpp"
#include "pdescent/fp_linalg.hpp"

namespace pdescent {

enum class CheegerMode { exact, heuristic };
enum class RelsizeMode { exact, upper };

/// Undirected multigraph; loops are kept but never lie on a cut.
struct SkeletonGraph {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  static SkeletonGraph from_complex(const TwoComplex& k) {
    SkeletonGraph g{k.vertex_count(), {}};
    g.edges.reserve(k.edge_count());
    for (const auto& e : k.edges()) g.edges.emplace_back(e.from, e.to);
    return g;
  }

  /// Adjacency lists without loops, with multiplicity.
  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(vertex_count);
    for (const auto& [a, b] : edges) {
      if (a >= vertex_count || b >= vertex_count) throw GraphError("edge endpoint out of range");
      if (a == b) continue;
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }

  bool connected() const {
    if (vertex_count == 0) return false;
    const auto adj = adjacency();
    std::vector<char> seen(vertex_count, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
    }
    return reached == vertex_count;
  }
};

struct CheegerResult {
  Rational value;
  bool exact = true;  // false: value is an upper bound from sweep cuts
  std::vector<std::size_t> witness;  // a set A attaining `value`
};

namespace detail {

inline bool ratio_less(std::int64_t b1, std::int64_t a1, std::int64_t b2, std::int64_t a2) { return b1 * a2 < b2 * a1; }

inline CheegerResult cheeger_exact(const SkeletonGraph& g) {
  const std::size_t n = g.vertex_count;
  if (n > 24) throw ModeError("exact Cheeger constant needs at most 24 vertices");
  const auto adj = g.adjacency();
  std::uint32_t members = 0;
  std::int64_t size = 0;
  std::int64_t boundary = 0;
  std::int64_t best_b = -1;
  std::int64_t best_a = 1;
  std::uint32_t best_set = 0;
  // Gray code: step i toggles the vertex at the lowest set bit of i.
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
    const auto v = static_cast<std::size_t>(__builtin_ctzll(i));
    const bool adding = !(members >> v & 1u);
    for (std::size_t w : adj[v]) boundary += ((members >> w & 1u) != 0) == adding ? -1 : 1;
    members ^= 1u << v;
    size += adding ? 1 : -1;
    if (size > 0 && 2 * size <= static_cast<std::int64_t>(n) && (best_b < 0 || ratio_less(boundary, size, best_b, best_a))) {
      best_b = boundary;
      best_a = size;
      best_set = members;
    }
  }
  CheegerResult out{Rational(best_b, best_a), true, {}};
  for (std::size_t v = 0; v < n; ++v)
    if (best_set >> v & 1u) out.witness.push_back(v);
  return out;
}

inline CheegerResult cheeger_sweep(const SkeletonGraph& g) {
  const std::size_t n = g.vertex_count;
  const auto adj = g.adjacency();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w : adj[v]) {
      lap(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)) += 1.0;
      lap(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) -= 1.0;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  const Eigen::VectorXd fiedler = solver.eigenvectors().col(1);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fiedler(static_cast<Eigen::Index>(a)) < fiedler(static_cast<Eigen::Index>(b));
  });
  CheegerResult out{Rational(0), false, {}};
  std::int64_t best_b = -1;
  std::int64_t best_a = 1;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<char> in(n, 0);
    std::int64_t boundary = 0;
    for (std::size_t k = 0; 2 * (k + 1) <= n; ++k) {
      const std::size_t v = pass == 0 ? order[k] : order[n - 1 - k];
      for (std::size_t w : adj[v]) boundary += in[w] ? -1 : 1;
      in[v] = 1;
      const auto size = static_cast<std::int64_t>(k + 1);
      if (best_b < 0 || ratio_less(boundary, size, best_b, best_a)) {
        best_b = boundary;
        best_a = size;
        out.witness.clear();
        for (std::size_t j = 0; j <= k; ++j) out.witness.push_back(pass == 0 ? order[j] : order[n - 1 - j]);
      }
    }
  }
  std::sort(out.witness.begin(), out.witness.end());
  out.value = Rational(best_b, best_a);
  return out;
}

}  // namespace detail

/// h(X) = min |dA| / |A| over 0 < |A| <= |V|/2.
inline CheegerResult cheeger_constant(const SkeletonGraph& g, CheegerMode mode) {
  if (g.vertex_count < 2) throw GraphError("Cheeger constant needs at least two vertices");
  if (!g.connected()) throw GraphError("graph is not connected");
  return mode == CheegerMode::exact ? detail::cheeger_exact(g) : detail::cheeger_sweep(g);
}

struct RelsizeResult {
  Rational value;           // min |supp| / |E|
  std::size_t support = 0;  // of `representative`
  Cochain representative;   // alpha + delta(f) attaining `support`
  bool exact = true;        // false: upper bound from local descent
};

namespace detail {

inline void local_descent(const TwoComplex& k, Cochain& c, std::size_t& support, const PrimeModulus& p) {
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t v = 0; v < k.vertex_count(); ++v) {
      if (v == k.basepoint()) continue;
      std::int64_t best_gain = 0;
      Residue best_t = 0;
      for (Residue t = 1; t < p.value(); ++t) {
        std::int64_t gain = 0;
        for (std::size_t e : k.incident_edges(v)) {
          const auto& ed = k.edge(e);
          if (ed.from == ed.to) continue;
          const Residue moved = ed.to == v ? p.add(c.values[e], t) : p.sub(c.values[e], t);
          gain += (c.values[e] != 0) - (moved != 0);
        }
        if (gain > best_gain) {
          best_gain = gain;
          best_t = t;
        }
      }
      if (best_gain > 0) {
        for (std::size_t e : k.incident_edges(v)) {
          const auto& ed = k.edge(e);
          if (ed.from == ed.to) continue;
          c.values[e] = ed.to == v ? p.add(c.values[e], best_t) : p.sub(c.values[e], best_t);
        }
        support -= static_cast<std::size_t>(best_gain);
        improved = true;
      }
    }
  }
}

}  // namespace detail

/// relsize(alpha) = min over cocycles c in the class of |supp(c)| / |E|.
/// Exact mode scans every potential with f(basepoint) = 0 (p^(|V|-1) <= 2^20);
/// upper mode runs single-vertex local descent from two starting points.
inline RelsizeResult relative_size(const TwoComplex& k, const Cochain& alpha, const PrimeModulus& p, RelsizeMode mode) {
  if (alpha.values.size() != k.edge_count()) throw DimensionError("class does not match the complex");
  if (auto f = first_violated_face(k, alpha, p)) throw CocycleConditionError("alpha is not a cocycle", *f);
  const auto coords = class_coordinates(k, alpha, p);
  if (std::all_of(coords.begin(), coords.end(), [](Residue x) { return x == 0; }))
    throw TrivialClassError("alpha represents the trivial class");
  const auto edges = static_cast<std::int64_t>(k.edge_count());

  if (mode == RelsizeMode::upper) {
    RelsizeResult best{Rational(0), 0, {}, false};
    for (const Cochain& start : {alpha, tree_normalized(k, alpha, p)}) {
      Cochain c = start;
      std::size_t s = support_size(c.values);
      detail::local_descent(k, c, s, p);
      if (best.representative.values.empty() || s < best.support) {
        best.support = s;
        best.representative = std::move(c);
      }
    }
    best.value = Rational(static_cast<std::int64_t>(best.support), edges);
    return best;
  }

  std::vector<std::size_t> free;
  for (std::size_t v = 0; v < k.vertex_count(); ++v)
    if (v != k.basepoint()) free.push_back(v);
  const auto total = checked_pow(p.value(), free.size(), std::uint64_t{1} << 20);
  if (!total) throw ModeError("exact relative size needs p^(|V|-1) <= 2^20");

  Cochain c = alpha;
  std::size_t s = support_size(c.values);
  RelsizeResult best{Rational(0), s, c, true};
  FpVector digit(free.size(), 0);
  for (std::uint64_t i = 1; i < *total; ++i) {
    // add delta(1_v) for the incremented digit; a wrapped digit has been added p times
    for (std::size_t d = 0; d < free.size(); ++d) {
      const std::size_t v = free[d];
      for (std::size_t e : k.incident_edges(v)) {
        const auto& ed = k.edge(e);
        if (ed.from == ed.to) continue;
        const bool was = c.values[e] != 0;
        c.values[e] = ed.to == v ? p.add(c.values[e], 1) : p.sub(c.values[e], 1);
        s = s - was + (c.values[e] != 0);
      }
      if (++digit[d] < p.value()) break;
      digit[d] = 0;
    }
    if (s < best.support) {
      best.support = s;
      best.representative = c;
    }
  }
  if (best.support == 0) throw TrivialClassError("alpha represents the trivial class");
  best.value = Rational(static_cast<std::int64_t>(best.support), edges);
  return best;
}

struct CutCheckReport {
  Rational cheeger;                 // h of the total 1-skeleton
  bool cheeger_exact = true;
  Rational relsize;                 // exact relative size of alpha on the base
  Rational rhs;                     // |E(K)| / (|V(K)|/p) * relsize
  bool holds = false;               // cheeger <= rhs
  std::vector<std::size_t> value_class_sizes;  // vertices per c-value
  std::size_t expected_class_size = 0;         // |V(total)| / p
  bool fiber_counts_ok = false;
  std::size_t cut_size = 0;          // |A| for A = zero c-value vertices
  std::size_t cut_boundary = 0;      // |dA|
  std::size_t cut_boundary_bound = 0;  // degree * |supp(c)|
  bool cut_ok = false;
};

/// Checks h(X~) <= |E(K)| / (|V(K)|/p) relsize(alpha) on the cover, together
/// with the two counting steps behind it: every c-value class has |V(X~)|/p
/// vertices, and the zero class A has |dA| <= degree |supp(c)| for a
/// minimum-support representative c.
inline CutCheckReport lemma_4_3_check(const CoveringMap& cov, const Cochain& alpha, const PrimeModulus& p) {
  const auto& base = cov.base();
  const auto& total = cov.total();
  CutCheckReport out;
  const auto rel = relative_size(base, alpha, p, RelsizeMode::exact);
  out.relsize = rel.value;
  const FpVector values = c_value_table(cov, rel.representative, p);

  out.value_class_sizes.assign(p.value(), 0);
  for (Residue x : values) ++out.value_class_sizes[x];
  out.expected_class_size = total.vertex_count() / p.value();
  out.fiber_counts_ok = total.vertex_count() % p.value() == 0 &&
                        std::all_of(out.value_class_sizes.begin(), out.value_class_sizes.end(),
                                    [&](std::size_t n) { return n == out.expected_class_size; });

  out.cut_size = out.value_class_sizes[0];
  for (const auto& e : total.edges())
    if ((values[e.from] == 0) != (values[e.to] == 0)) ++out.cut_boundary;
  out.cut_boundary_bound = cov.degree() * rel.support;
  out.cut_ok = out.cut_boundary <= out.cut_boundary_bound;

  const auto graph = SkeletonGraph::from_complex(total);
  const auto h = cheeger_constant(graph, total.vertex_count() <= 24 ? CheegerMode::exact : CheegerMode::heuristic);
  out.cheeger = h.value;
  out.cheeger_exact = h.exact;
  out.rhs = Rational(static_cast<std::int64_t>(base.edge_count() * p.value()), static_cast<std::int64_t>(base.vertex_count())) *
            out.relsize;
  out.holds = out.cheeger <= out.rhs;
  return out;
}

struct TauObstruction {
  std::vector<Rational> cheeger_bounds;  // |E(K)| / (|V(K)|/p) * relsize_i
  bool decreasing_to_zero_consistent = false;
  std::string summary;
};

/// Turns a sequence of relative sizes of classes on covers of K into the
/// matching Cheeger upper bounds for the kernels of those classes.
inline TauObstruction tau_obstruction_report(const std::vector<Rational>& relsizes, std::size_t base_edges,
                                             std::size_t base_vertices, const PrimeModulus& p) {
  TauObstruction out;
  const Rational scale(static_cast<std::int64_t>(base_edges * p.value()), static_cast<std::int64_t>(base_vertices));
  for (const auto& r : relsizes) out.cheeger_bounds.push_back(scale * r);
  out.decreasing_to_zero_consistent =
      out.cheeger_bounds.size() >= 2 &&
      std::adjacent_find(out.cheeger_bounds.begin(), out.cheeger_bounds.end(),
                         [](const Rational& a, const Rational& b) { return !(b < a); }) == out.cheeger_bounds.end();
  out.summary = out.decreasing_to_zero_consistent
                    ? "Cheeger upper bounds decrease strictly along the sequence; if relsize tends to 0 the Cheeger "
                      "constants of the kernel covers tend to 0 and Property (tau) fails for that family"
                    : "sequence does not exhibit strictly decreasing Cheeger upper bounds";
  return out;
}

}  // namespace pdescent
