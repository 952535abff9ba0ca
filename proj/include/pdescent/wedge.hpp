#pragma once

// Wedge cochains c1 ^ c2 on an elementary abelian p-cover, and the family of
// cocycles they span with support inside the preimage of supp(U).

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pdescent/complex.hpp"
#include "pdescent/covers.hpp"
#include "pdescent/errors.hpp"
#include "pdescent/fp_linalg.hpp"

namespace pdescent {

/// (c1 ^ c2)(e) = c1(q(e)) * c2-value(initial vertex of e).
inline Cochain wedge_cochain(const CoveringMap& cov, const Cochain& c1, const FpVector& c2_values, const PrimeModulus& p) {
  const auto& t = cov.total();
  if (c1.values.size() != cov.base().edge_count()) throw DimensionError("c1 does not match the base complex");
  if (c2_values.size() != t.vertex_count()) throw DimensionError("c-value table does not match the total complex");
  Cochain out{FpVector(t.edge_count(), 0)};
  for (std::size_t e = 0; e < t.edge_count(); ++e) {
    const Residue a = c1.values[cov.edge_projection(e)];
    if (a) out.values[e] = p.mul(a, c2_values[t.edge(e).from]);
  }
  return out;
}

inline Cochain wedge_cochain(const CoveringMap& cov, const Cochain& c1, const Cochain& c2, const PrimeModulus& p) {
  return wedge_cochain(cov, c1, c_value_table(cov, c2, p), p);
}

/// g h g^-1 h^-1 for two loops based at the same vertex.
inline EdgePath commutator_loop(const TwoComplex& k, const EdgePath& g, const EdgePath& h) {
  if (g.start != h.start || !k.is_closed(g) || !k.is_closed(h)) throw InvalidPathError("commutator needs two loops at one basepoint");
  EdgePath out{g.start, {}};
  for (const auto* part : {&g, &h}) out.steps.insert(out.steps.end(), part->steps.begin(), part->steps.end());
  for (const auto& part : {k.reversed(g), k.reversed(h)}) out.steps.insert(out.steps.end(), part.steps.begin(), part.steps.end());
  return out;
}

/// Based loops l_i with c_j(l_i) = [i == j] for cocycles with independent
/// classes, built as products of fundamental loops by solving against the
/// class-coordinate matrix.
inline std::vector<EdgePath> dual_loops(const TwoComplex& k, const std::vector<Cochain>& classes, const PrimeModulus& p) {
  const FpMatrix coords = class_matrix(k, classes, p);
  std::vector<EdgePath> loops;
  loops.reserve(classes.size());
  FpVector target(classes.size(), 0);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::fill(target.begin(), target.end(), 0);
    target[i] = 1;
    const auto y = solve(coords, target, p);
    if (!y) throw Error("classes are dependent in H^1; no dual loops exist");
    EdgePath loop{k.basepoint(), {}};
    for (std::size_t j = 0; j < y->size(); ++j) {
      if ((*y)[j] == 0) continue;
      const EdgePath f = k.fundamental_loop(k.non_tree_edges()[j]);
      for (Residue rep = 0; rep < (*y)[j]; ++rep) loop.steps.insert(loop.steps.end(), f.steps.begin(), f.steps.end());
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

struct WedgeFamily {
  std::vector<Cochain> u;             // base cocycles U
  std::vector<Cochain> c;             // base cocycles C (a complement of V1 n V2 in V2)
  std::vector<Cochain> span_basis;    // u[a] ^ c[b] at index a * |C| + b
  std::vector<Cochain> cocycle_basis; // basis of Z^1(total) n <U ^ C>
  FpMatrix cocycle_coefficients;      // cocycle_basis rows in span_basis coordinates (echelon)
  FpMatrix face_evaluations;          // orbit representative faces x span_basis
  FpMatrix commutator_evaluations;    // commutator lifts x span_basis
  std::size_t cover_rank = 0;         // n
  std::size_t intersection_dim = 0;   // dim(V1 n V2)
  std::size_t face_orbits = 0;        // r
  std::size_t span_rank = 0;          // rank of span_basis modulo coboundaries, read on commutator lifts
  std::size_t certified_rank = 0;     // rank of cocycle_basis classes, read on commutator lifts

  /// (n - u) u - r
  std::int64_t guaranteed_size() const {
    const auto n = static_cast<std::int64_t>(cover_rank);
    const auto uu = static_cast<std::int64_t>(u.size());
    return (n - uu) * uu - static_cast<std::int64_t>(face_orbits);
  }
};

/// Builds the wedge family for cocycles U on the base of an elementary
/// abelian p-cover. The cocycle condition is imposed on one face per deck
/// orbit; independence in H^1 of the total complex is read off the lifted
/// commutators [l_j, l_i] of dual loops.
inline WedgeFamily theorem_5_1_family(const CoveringMap& cov, const std::vector<Cochain>& U, const PrimeModulus& p) {
  if (cov.deck_kind() != DeckKind::elementary_abelian || cov.deck_modulus() != p.value() ||
      cov.classes().size() != cov.deck_rank())
    throw UnsupportedCoverError("wedge families need an elementary abelian p-cover built from cocycles");
  const auto& base = cov.base();
  const auto& total = cov.total();
  for (std::size_t j = 0; j < U.size(); ++j) {
    if (U[j].values.size() != base.edge_count()) throw DimensionError("U[" + std::to_string(j) + "] does not match the base");
    if (auto f = first_violated_face(base, U[j], p))
      throw CocycleConditionError("U[" + std::to_string(j) + "] is not a cocycle", *f);
  }
  WedgeFamily fam;
  fam.u = U;
  fam.cover_rank = cov.deck_rank();
  fam.face_orbits = base.face_count();

  FpMatrix chosen = class_matrix(base, U, p);
  if (rank_of(chosen, p) < U.size()) throw Error("U does not represent independent classes in H^1");
  for (const auto& cls : cov.classes()) {
    FpMatrix trial = chosen;
    trial.append_row(class_coordinates(base, cls, p));
    if (rank_of(trial, p) == trial.rows()) {
      chosen = std::move(trial);
      fam.c.push_back(cls);
    }
  }
  fam.intersection_dim = fam.cover_rank - fam.c.size();

  std::vector<FpVector> c_values;
  c_values.reserve(fam.c.size());
  for (const auto& c2 : fam.c) c_values.push_back(c_value_table(cov, c2, p));
  for (const auto& c1 : fam.u)
    for (const auto& cv : c_values) fam.span_basis.push_back(wedge_cochain(cov, c1, cv, p));
  const std::size_t m = fam.span_basis.size();

  const auto reps = deck_orbit_representatives(cov);
  fam.face_evaluations = FpMatrix(reps.size(), m);
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < m; ++j)
      fam.face_evaluations(i, j) = evaluate_on_path(total, fam.span_basis[j], total.face(reps[i]), p);

  const auto kernel = kernel_basis(fam.face_evaluations, p);
  fam.cocycle_coefficients = kernel.basis();
  for (std::size_t r = 0; r < kernel.dim(); ++r) {
    Cochain z{FpVector(total.edge_count(), 0)};
    for (std::size_t j = 0; j < m; ++j) {
      const Residue x = kernel.basis()(r, j);
      if (x == 0) continue;
      for (std::size_t e = 0; e < z.values.size(); ++e)
        if (fam.span_basis[j].values[e]) z.values[e] = p.add(z.values[e], p.mul(x, fam.span_basis[j].values[e]));
    }
    fam.cocycle_basis.push_back(std::move(z));
  }

  // Dual loops for U followed by C; commutator [l_C[b], l_U[a]] pairs with u[a] ^ c[b].
  std::vector<Cochain> both = fam.u;
  both.insert(both.end(), fam.c.begin(), fam.c.end());
  const auto loops = dual_loops(base, both, p);
  fam.commutator_evaluations = FpMatrix(m, m);
  FpMatrix cocycle_evals(fam.cocycle_basis.size(), m);
  for (std::size_t a = 0; a < fam.u.size(); ++a)
    for (std::size_t b = 0; b < fam.c.size(); ++b) {
      const std::size_t row = a * fam.c.size() + b;
      const EdgePath lifted =
          cov.lift_path(commutator_loop(base, loops[fam.u.size() + b], loops[a]), cov.basepoint_lift());
      for (std::size_t j = 0; j < m; ++j) fam.commutator_evaluations(row, j) = evaluate_on_path(total, fam.span_basis[j], lifted, p);
      for (std::size_t j = 0; j < fam.cocycle_basis.size(); ++j)
        cocycle_evals(j, row) = evaluate_on_path(total, fam.cocycle_basis[j], lifted, p);
    }
  fam.span_rank = rank_of(fam.commutator_evaluations, p);
  fam.certified_rank = rank_of(cocycle_evals, p);
  return fam;
}

}  // namespace pdescent
