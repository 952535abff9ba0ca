#pragma once

// The descent pipeline over a tower of elementary abelian p-covers, and the
// homology-growth diagnostics that accompany it.
//
// Each step of the pipeline takes u cocycles U_i on K_i with independent
// classes, builds K_{i+1}, forms the wedge family on K_{i+1} (support inside
// the preimage of supp(U_i)) and, when the family has more than u members,
// cuts its span down to dimension u with the subspace Plotkin reduction. The
// ratio |supp(U_i)| / |E(K_i)| then shrinks by at least
// (p^(u+1) - p) / (p^(u+1) - 1) per level.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdescent/complex.hpp"
#include "pdescent/covers.hpp"
#include "pdescent/errors.hpp"
#include "pdescent/fp_linalg.hpp"
#include "pdescent/reduce.hpp"
#include "pdescent/wedge.hpp"

namespace pdescent {

enum class SeriesKind { derived, rank, explicit_classes };

struct SeriesSpec {
  SeriesKind kind = SeriesKind::derived;
  std::size_t rank_k = 0;                                // SeriesKind::rank
  std::vector<std::vector<Cochain>> explicit_levels;     // classes on K_1, K_2, ...
  std::size_t depth = 1;                                 // number of levels K_1 .. K_depth
  std::uint64_t cell_budget = 1'000'000;                 // cells allowed in the deepest cover
  SearchMode reduce_mode = SearchMode::exact;
  std::uint64_t seed = 0;
};

struct TowerRecord {
  std::size_t level = 1;
  std::uint64_t index = 1;                     // [G : G_i]
  std::optional<std::size_t> quotient_rank;    // n_i = d_p(G_i / G_{i+1})
  std::size_t d_p = 0;                         // d_p(G_i)
  std::size_t edges = 0;                       // |E(K_i)|
  std::size_t faces = 0;                       // r at this level
  std::optional<std::size_t> support;          // |supp(U_i)|
  std::optional<Rational> relsize_upper;       // |supp(U_i)| / |E(K_i)|
  std::optional<Rational> bound_factor;        // factor the step into this level must meet
  std::optional<bool> reduction_exact;
  std::optional<std::size_t> wedge_count;      // |U+_{i+1}| built from this level
  std::optional<std::int64_t> wedge_bound;     // (n_i - u) u - r
  std::optional<bool> classes_independent;     // U_i independent in H^1(K_i)
  std::optional<bool> arithmetic_lemma;        // (n-u)u - r >= 2u where its hypotheses hold
};

enum class Verdict { decay_certified, bound_violated, budget_exhausted };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::decay_certified: return "decay-certified";
    case Verdict::bound_violated: return "bound-violated";
    case Verdict::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

struct DescentReport {
  std::vector<TowerRecord> records;
  std::size_t u = 0;
  std::uint32_t p = 2;
  std::optional<Rational> lambda_estimate;
  Verdict verdict = Verdict::decay_certified;
  std::string note;
};

struct Parameters {
  Rational lambda;
  std::size_t u = 1;
};

/// u = ceil(4 |R| / lambda), at least 1.
inline std::size_t u_from_lambda(std::size_t relator_count, const Rational& lambda) {
  if (lambda <= Rational(0)) throw NotRapidlyDescendingError("lambda must be positive");
  const Rational q = Rational(4 * static_cast<std::int64_t>(relator_count)) / lambda;
  const std::int64_t ceil = q.numerator() / q.denominator() + (q.numerator() % q.denominator() != 0 ? 1 : 0);
  return static_cast<std::size_t>(std::max<std::int64_t>(1, ceil));
}

/// lambda = min over the prefix of (n_i - 2) / [G : G_i]; u from lambda.
inline Parameters choose_parameters(const GroupPresentation& pres, const std::vector<TowerRecord>& prefix) {
  std::optional<Rational> lambda;
  for (const auto& r : prefix) {
    if (!r.quotient_rank) continue;
    const Rational x(static_cast<std::int64_t>(*r.quotient_rank) - 2, static_cast<std::int64_t>(r.index));
    if (!lambda || x < *lambda) lambda = x;
  }
  if (!lambda) throw MalformedTowerError("no level of the prefix carries a quotient rank");
  if (*lambda <= Rational(0))
    throw NotRapidlyDescendingError("lambda estimate " + std::to_string(lambda->numerator()) + "/" +
                                    std::to_string(lambda->denominator()) + " is not positive on the prefix");
  return {*lambda, u_from_lambda(pres.relator_count(), *lambda)};
}

namespace detail {

inline bool independent_classes(const TwoComplex& k, const std::vector<Cochain>& classes, const PrimeModulus& p) {
  return rank_of(class_matrix(k, classes, p), p) == classes.size();
}

/// Covering classes for the next level. The rank-k series takes basis classes
/// independent of `keep` first, so that the wedge family sees as many new
/// directions as possible, then fills up in basis order.
inline std::vector<Cochain> select_classes(const SeriesSpec& spec, const TwoComplex& k, const std::vector<Cochain>& basis,
                                           const std::vector<Cochain>& keep, std::size_t level, const PrimeModulus& p) {
  switch (spec.kind) {
    case SeriesKind::derived:
      return basis;
    case SeriesKind::explicit_classes:
      if (level > spec.explicit_levels.size()) throw Error("no explicit classes given for level " + std::to_string(level));
      return spec.explicit_levels[level - 1];
    case SeriesKind::rank: {
      if (basis.size() < spec.rank_k)
        throw Error("level " + std::to_string(level) + " has only " + std::to_string(basis.size()) + " classes");
      std::vector<Cochain> chosen;
      FpMatrix span = class_matrix(k, keep, p);
      std::vector<char> used(basis.size(), 0);
      for (std::size_t j = 0; j < basis.size() && chosen.size() < spec.rank_k; ++j) {
        FpMatrix trial = span;
        trial.append_row(class_coordinates(k, basis[j], p));
        if (rank_of(trial, p) == trial.rows()) {
          span = std::move(trial);
          chosen.push_back(basis[j]);
          used[j] = 1;
        }
      }
      for (std::size_t j = 0; j < basis.size() && chosen.size() < spec.rank_k; ++j)
        if (!used[j]) chosen.push_back(basis[j]);
      return chosen;
    }
  }
  return {};
}

inline std::size_t union_support(const std::vector<Cochain>& cs, std::size_t edges) {
  std::size_t n = 0;
  for (std::size_t e = 0; e < edges; ++e)
    if (std::any_of(cs.begin(), cs.end(), [&](const Cochain& c) { return c.values[e] != 0; })) ++n;
  return n;
}

inline TowerRecord level_record(std::size_t level, std::uint64_t index, const TwoComplex& k, std::size_t d_p) {
  TowerRecord r;
  r.level = level;
  r.index = index;
  r.d_p = d_p;
  r.edges = k.edge_count();
  r.faces = k.face_count();
  return r;
}

}  // namespace detail

struct SeriesTower {
  std::vector<std::shared_ptr<const TwoComplex>> levels;  // K_1 .. K_m
  std::vector<CoveringMap> covers;                         // K_{i+1} -> K_i
  std::vector<std::vector<Cochain>> bases;                 // H^1 basis of each K_i
  std::vector<std::size_t> quotient_ranks;                 // classes used at each level
  bool budget_hit = false;
};

/// The complexes K_1 .. K_depth of the series, stopping early when the next
/// cover would exceed the cell budget.
inline SeriesTower build_series_tower(const GroupPresentation& pres, const SeriesSpec& spec, const PrimeModulus& p) {
  if (spec.depth < 1) throw DimensionError("depth must be at least 1");
  SeriesTower t;
  t.levels.push_back(std::make_shared<const TwoComplex>(build_presentation_complex(pres)));
  for (std::size_t level = 1;; ++level) {
    const auto& k = t.levels.back();
    t.bases.push_back(h1_cocycle_basis(*k, p));
    const auto classes = detail::select_classes(spec, *k, t.bases.back(), {}, level, p);
    t.quotient_ranks.push_back(classes.size());
    if (level == spec.depth) break;
    const auto degree = checked_pow(p.value(), classes.size(), spec.cell_budget);
    if (!degree || k->cell_count() * *degree > spec.cell_budget) {
      t.budget_hit = true;
      break;
    }
    t.covers.push_back(build_abelian_p_cover(k, classes, p));
    t.levels.push_back(t.covers.back().total_ptr());
  }
  return t;
}

/// Indices, quotient ranks and d_p along the series, without cocycles.
inline std::vector<TowerRecord> build_series_prefix(const GroupPresentation& pres, const SeriesSpec& spec,
                                                    const PrimeModulus& p, bool* budget_hit = nullptr) {
  const SeriesTower t = build_series_tower(pres, spec, p);
  std::vector<TowerRecord> out;
  std::uint64_t index = 1;
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    if (i > 0) index *= t.covers[i - 1].degree();
    out.push_back(detail::level_record(i + 1, index, *t.levels[i], t.bases[i].size()));
    out.back().quotient_rank = t.quotient_ranks[i];
  }
  if (budget_hit) *budget_hit = t.budget_hit;
  return out;
}

/// Runs the descent pipeline for `spec.depth` levels with |U_i| = u.
inline DescentReport run_descent_pipeline(const GroupPresentation& pres, const SeriesSpec& spec, std::size_t u,
                                          const PrimeModulus& p) {
  if (u < 1) throw DimensionError("u must be at least 1");
  if (spec.depth < 1) throw DimensionError("depth must be at least 1");
  DescentReport report;
  report.u = u;
  report.p = p.value();

  auto k = std::make_shared<const TwoComplex>(build_presentation_complex(pres));
  auto basis = h1_cocycle_basis(*k, p);
  if (basis.size() < u)
    throw Error("H^1(K_1; F_p) has " + std::to_string(basis.size()) + " classes, fewer than u = " + std::to_string(u));
  std::vector<Cochain> U(basis.begin(), basis.begin() + static_cast<std::ptrdiff_t>(u));
  std::uint64_t index = 1;
  const Rational factor = plotkin_factor(p.value(), u);

  {
    auto first = detail::level_record(1, index, *k, basis.size());
    first.support = detail::union_support(U, k->edge_count());
    first.relsize_upper = Rational(static_cast<std::int64_t>(*first.support), static_cast<std::int64_t>(k->edge_count()));
    first.classes_independent = true;
    report.records.push_back(std::move(first));
  }

  bool completed = true;
  for (std::size_t level = 1; level < spec.depth; ++level) {
    auto& cur = report.records.back();
    const auto classes = detail::select_classes(spec, *k, basis, U, level, p);
    cur.quotient_rank = classes.size();
    const auto degree = checked_pow(p.value(), classes.size(), spec.cell_budget);
    if (!degree || k->cell_count() * *degree > spec.cell_budget) {
      report.verdict = Verdict::budget_exhausted;
      report.note = "cover of level " + std::to_string(level + 1) + " exceeds the cell budget of " +
                    std::to_string(spec.cell_budget);
      completed = false;
      break;
    }
    const CoveringMap cover = build_abelian_p_cover(k, classes, p);
    const WedgeFamily fam = theorem_5_1_family(cover, U, p);
    cur.wedge_count = fam.cocycle_basis.size();
    cur.wedge_bound = fam.guaranteed_size();

    const auto& total = cover.total();
    auto next_basis = h1_cocycle_basis(total, p);
    index *= *degree;
    auto next = detail::level_record(level + 1, index, total, next_basis.size());

    // preimage of supp(U_i)
    std::vector<char> allowed(total.edge_count(), 0);
    for (std::size_t e = 0; e < total.edge_count(); ++e)
      allowed[e] = std::any_of(U.begin(), U.end(), [&](const Cochain& c) { return c.values[cover.edge_projection(e)] != 0; });

    if (fam.cocycle_basis.size() <= u) {
      if (!fam.cocycle_basis.empty()) {
        next.support = detail::union_support(fam.cocycle_basis, total.edge_count());
        next.relsize_upper = Rational(static_cast<std::int64_t>(*next.support), static_cast<std::int64_t>(total.edge_count()));
        next.classes_independent = detail::independent_classes(total, fam.cocycle_basis, p);
      }
      report.records.push_back(std::move(next));
      report.verdict = Verdict::bound_violated;
      report.note = "wedge family at level " + std::to_string(level + 1) + " has " +
                    std::to_string(fam.cocycle_basis.size()) + " members, not more than u = " + std::to_string(u);
      completed = false;
      break;
    }

    FpMatrix gens(0, total.edge_count());
    for (const auto& z : fam.cocycle_basis) gens.append_row(z.values);
    const FpSubspace span = FpSubspace::span(gens, p);
    const auto red = reduce_to_dimension(span, u, spec.reduce_mode, spec.seed + level);

    std::vector<Cochain> next_u;
    for (std::size_t r = 0; r < red.subspace.dim(); ++r) next_u.push_back({red.subspace.basis().row_vector(r)});
    for (const auto& c : next_u)
      for (std::size_t e = 0; e < c.values.size(); ++e)
        if (c.values[e] && !allowed[e]) throw std::logic_error("reduced family leaves the preimage of supp(U)");

    next.support = red.support;
    next.relsize_upper = Rational(static_cast<std::int64_t>(red.support), static_cast<std::int64_t>(total.edge_count()));
    next.bound_factor = factor;
    next.reduction_exact = red.exact && red.chain_bound_met;
    next.classes_independent = detail::independent_classes(total, next_u, p);

    const Rational ratio = *next.relsize_upper / *cur.relsize_upper;
    report.records.push_back(std::move(next));
    if (!(ratio <= factor) || !(ratio < Rational(1))) {
      report.verdict = Verdict::bound_violated;
      report.note = "support ratio at level " + std::to_string(level + 1) + " missed the reduction factor";
      completed = false;
      break;
    }
    k = cover.total_ptr();
    basis = std::move(next_basis);
    U = std::move(next_u);
  }

  if (completed) {
    report.verdict = Verdict::decay_certified;
    auto& last = report.records.back();
    if (!last.quotient_rank) last.quotient_rank = detail::select_classes(spec, *k, basis, U, last.level, p).size();
    report.note = "relative support decays by the reduction factor at every level; the largeness dichotomy for "
                  "linear homology growth turns this into a p-largeness criterion, which is not decided here";
  }

  for (const auto& r : report.records) {
    if (!r.quotient_rank) continue;
    const Rational x(static_cast<std::int64_t>(*r.quotient_rank) - 2, static_cast<std::int64_t>(r.index));
    if (!report.lambda_estimate || x < *report.lambda_estimate) report.lambda_estimate = x;
  }
  // (n - u) u - r >= 2u wherever lambda*index > 4u, (n-2)/index > lambda/2 and lambda*u >= 4|R|
  if (report.lambda_estimate && *report.lambda_estimate > Rational(0)) {
    const Rational lambda = *report.lambda_estimate;
    const auto uu = static_cast<std::int64_t>(u);
    for (auto& r : report.records) {
      if (!r.quotient_rank) continue;
      const auto idx = static_cast<std::int64_t>(r.index);
      const auto n = static_cast<std::int64_t>(*r.quotient_rank);
      const bool hyp = lambda * idx > Rational(4 * uu) && Rational(n - 2, idx) > lambda / 2 &&
                       lambda * uu >= Rational(4 * static_cast<std::int64_t>(pres.relator_count()));
      if (hyp) r.arithmetic_lemma = (n - uu) * uu - static_cast<std::int64_t>(pres.relator_count()) * idx >= 2 * uu;
    }
  }
  return report;
}

struct CriteriaReport {
  std::uint32_t p = 2;
  std::vector<std::uint64_t> indices;
  std::vector<std::size_t> quotient_ranks;
  std::vector<double> log_index_ratio;    // log [G_i : G_{i+1}] / [G : G_i] = n_i log p / index
  std::vector<Rational> rank_ratio;       // n_i / [G : G_i]
  std::vector<Rational> running_infimum;  // of rank_ratio
  bool abelian_quotients = true;          // (i): holds by construction of abelian p-series
  bool log_ratio_growing = false;         // (ii): strictly increasing over the prefix
  bool rank_ratio_positive = false;       // (iii) and rapid descent: infimum over the prefix > 0
  std::string note;
};

/// Finite-prefix diagnostic for the largeness criteria; never a proof.
inline CriteriaReport largeness_criteria_report(const std::vector<std::pair<std::uint64_t, std::size_t>>& records,
                                                const PrimeModulus& p) {
  if (records.empty()) throw MalformedTowerError("no records");
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].first <= records[i - 1].first) throw MalformedTowerError("indices must increase strictly");
  CriteriaReport out;
  out.p = p.value();
  const double logp = std::log(static_cast<double>(p.value()));
  for (const auto& [index, n] : records) {
    out.indices.push_back(index);
    out.quotient_ranks.push_back(n);
    out.log_index_ratio.push_back(static_cast<double>(n) * logp / static_cast<double>(index));
    const Rational r(static_cast<std::int64_t>(n), static_cast<std::int64_t>(index));
    out.rank_ratio.push_back(r);
    out.running_infimum.push_back(out.running_infimum.empty() ? r : std::min(out.running_infimum.back(), r));
  }
  out.log_ratio_growing = out.log_index_ratio.size() >= 2;
  for (std::size_t i = 1; i < out.log_index_ratio.size(); ++i)
    if (!(out.log_index_ratio[i] > out.log_index_ratio[i - 1])) out.log_ratio_growing = false;
  out.rank_ratio_positive = out.running_infimum.back() > Rational(0);
  out.note = "finite-prefix diagnostic: consistency of the prefix with each condition, not a proof";
  return out;
}

struct QuasiAdditiveResult {
  Rational estimate;  // f(i_max) / i_max
  Rational lower;     // max (f(i) - k) / i
  Rational upper;     // min (f(i) + k) / i
  bool bounded = false;  // |f(i)| <= 2k on the sample
};

/// Limit estimate for f(i)/i when |f(i+j) - f(i) - f(j)| <= k. f - k is
/// superadditive and f + k subadditive, which brackets the limit.
inline QuasiAdditiveResult quasi_additive_limit(std::vector<std::pair<std::int64_t, std::int64_t>> values, std::int64_t k) {
  if (values.empty()) throw Error("no values");
  if (k < 0) throw Error("k must be non-negative");
  std::sort(values.begin(), values.end());
  std::map<std::int64_t, std::int64_t> f;
  for (const auto& [i, fi] : values) {
    if (i < 1) throw Error("arguments must be positive");
    f[i] = fi;
  }
  for (const auto& [i, fi] : f)
    for (const auto& [j, fj] : f) {
      if (j < i) continue;
      auto it = f.find(i + j);
      if (it == f.end()) continue;
      if (std::llabs(it->second - fi - fj) > k)
        throw NotQuasiAdditiveError("|f(" + std::to_string(i + j) + ") - f(" + std::to_string(i) + ") - f(" +
                                        std::to_string(j) + ")| exceeds " + std::to_string(k),
                                    static_cast<long>(i), static_cast<long>(j));
    }
  QuasiAdditiveResult out;
  const auto& [last_i, last_f] = *f.rbegin();
  out.estimate = Rational(last_f, last_i);
  bool first = true;
  out.bounded = true;
  for (const auto& [i, fi] : f) {
    const Rational lo(fi - k, i);
    const Rational hi(fi + k, i);
    if (first || lo > out.lower) out.lower = lo;
    if (first || hi < out.upper) out.upper = hi;
    first = false;
    if (std::llabs(fi) > 2 * k) out.bounded = false;
  }
  return out;
}

/// Smallest k for which the sample is k-quasi-additive.
inline std::int64_t fitted_quasi_additivity(const std::vector<std::pair<std::int64_t, std::int64_t>>& values) {
  std::map<std::int64_t, std::int64_t> f(values.begin(), values.end());
  std::int64_t k = 0;
  for (const auto& [i, fi] : f)
    for (const auto& [j, fj] : f) {
      auto it = f.find(i + j);
      if (it != f.end()) k = std::max<std::int64_t>(k, std::llabs(it->second - fi - fj));
    }
  return k;
}

struct CyclicGrowthEntry {
  std::size_t i = 0;
  std::size_t d_p = 0;
  Rational ratio;
};

struct CyclicGrowthReport {
  std::uint32_t p = 2;
  std::vector<CyclicGrowthEntry> entries;
  std::int64_t fitted_k = 0;
  QuasiAdditiveResult limit;
  bool positive_limit_signal = false;
  std::string note;
};

/// d_p of the i-fold cyclic covers for i = 1..max_i, with the limit of
/// d_p(K_i)/i estimated from the quasi-additive bracket.
inline CyclicGrowthReport cyclic_growth_report(const GroupPresentation& pres, const std::vector<std::int64_t>& weights,
                                               const PrimeModulus& p, std::size_t max_i) {
  if (max_i < 1) throw DimensionError("max_i must be at least 1");
  auto k = std::make_shared<const TwoComplex>(build_presentation_complex(pres));
  if (weights.size() != k->edge_count()) throw DimensionError("need one weight per generator");
  // loop evaluations of an integer cochain on a one-vertex complex are the weights themselves
  std::int64_t g = 0;
  for (auto w : weights) g = std::gcd(g, w);
  if (g == 0) throw Error("weights define the zero homomorphism");
  if (g != 1) throw Error("weights do not define a surjection onto Z (common divisor " + std::to_string(g) + ")");

  CyclicGrowthReport out;
  out.p = p.value();
  std::vector<std::pair<std::int64_t, std::int64_t>> values;
  for (std::size_t i = 1; i <= max_i; ++i) {
    const auto cover = build_cyclic_cover(k, weights, i);
    const std::size_t d = homology_dim_p(cover.total(), p);
    out.entries.push_back({i, d, Rational(static_cast<std::int64_t>(d), static_cast<std::int64_t>(i))});
    values.emplace_back(static_cast<std::int64_t>(i), static_cast<std::int64_t>(d));
  }
  out.fitted_k = fitted_quasi_additivity(values);
  out.limit = quasi_additive_limit(values, out.fitted_k);
  out.positive_limit_signal = !out.limit.bounded;
  out.note = out.positive_limit_signal
                 ? "d_p(K_i) exceeds twice the fitted quasi-additivity constant: prefix consistent with a positive limit"
                 : "d_p(K_i) stays within twice the fitted quasi-additivity constant: no growth signal";
  return out;
}

}  // namespace pdescent
