#pragma once

// Small-support subspaces of a subspace V of F_p^E (the subspace form of
// the Plotkin bound).
//
// A hyperplane of V is the kernel W_f of a nonzero functional f on the
// echelon coordinates of V. Coordinate e lies outside supp(W_f) exactly when
// the column of the basis at e is zero or a multiple of f, so
//   |supp(W_f)| = |supp(V)| - #{e : column e is a nonzero multiple of f}.
// Grouping columns by projective class therefore scores every hyperplane at
// once.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pdescent/errors.hpp"
#include "pdescent/fp_linalg.hpp"

namespace pdescent {

enum class SearchMode { exact, sampled };

/// Scales v so that its first nonzero entry is 1. Returns false for v = 0.
inline bool normalize_projective(FpVector& v, const PrimeModulus& p) {
  auto it = std::find_if(v.begin(), v.end(), [](Residue x) { return x != 0; });
  if (it == v.end()) return false;
  const Residue s = p.inv(*it);
  for (auto& x : v) x = p.mul(x, s);
  return true;
}

/// Number of support coordinates removed by each projective functional class.
inline std::map<FpVector, std::size_t> column_classes(const FpSubspace& v) {
  std::map<FpVector, std::size_t> hist;
  for (std::size_t e = 0; e < v.ambient_dim(); ++e) {
    FpVector col = v.basis().column_vector(e);
    if (normalize_projective(col, v.modulus())) ++hist[col];
  }
  return hist;
}

/// W_f = {x . B : f . x = 0} for the echelon basis B of v.
inline FpSubspace hyperplane_of(const FpSubspace& v, const FpVector& functional) {
  const auto& p = v.modulus();
  FpMatrix f(0, v.dim());
  f.append_row(functional);
  const auto coords = kernel_basis(f, p);
  FpMatrix gens(0, v.ambient_dim());
  for (std::size_t r = 0; r < coords.dim(); ++r) gens.append_row(v.combine(coords.basis().row(r)));
  return FpSubspace::span(gens, p);
}

/// Calls fn(functional, |supp(W_f)|) for every hyperplane of v, one
/// functional per projective class (first nonzero entry 1), in lexicographic
/// order. Refuses beyond `cap` hyperplanes.
inline void for_each_hyperplane_support(const FpSubspace& v,
                                        const std::function<void(const FpVector&, std::size_t)>& fn,
                                        std::uint64_t cap = 1u << 20) {
  const auto& p = v.modulus();
  const std::size_t dim = v.dim();
  const auto hist = column_classes(v);
  const std::size_t base = subspace_support(v).size();
  std::uint64_t count = 0;
  FpVector f(dim, 0);
  for (std::size_t lead = dim; lead-- > 0;) {
    // functionals whose first nonzero entry sits at position `lead`
    const std::size_t tail = dim - lead - 1;
    const auto n = checked_pow(p.value(), tail, cap);
    if (!n || (count += *n) > cap) throw EnumerationRefused("more than " + std::to_string(cap) + " hyperplanes");
    std::fill(f.begin(), f.end(), 0);
    f[lead] = 1;
    for (std::uint64_t i = 0; i < *n; ++i) {
      std::uint64_t rest = i;
      for (std::size_t k = dim; k-- > lead + 1;) {
        f[k] = static_cast<Residue>(rest % p.value());
        rest /= p.value();
      }
      auto it = hist.find(f);
      fn(f, base - (it == hist.end() ? 0 : it->second));
    }
  }
}

/// w(p^v - 1) <= (p^v - p^(v-w)) s_v, evaluated without overflow.
inline bool chain_bound_holds(std::uint32_t p, std::size_t v, std::size_t w, std::size_t supp_w, std::size_t supp_v) {
  using i128 = __int128;
  const i128 cap = static_cast<i128>(1) << 64;
  auto sat_pow = [&](std::size_t e) {
    i128 out = 1;
    for (std::size_t i = 0; i < e && out < cap; ++i) out *= p;
    return std::min(out, cap);
  };
  const i128 sv = static_cast<i128>(supp_v);
  const i128 sw = static_cast<i128>(supp_w);
  // p^(v-w) [p^w (s_v - s_w) - s_v] + s_w >= 0
  const i128 x = sat_pow(w) * (sv - sw) - sv;
  if (x >= 0) return true;
  return sat_pow(v - w) * x + sw >= 0;
}

/// (p^v - p^(v-w)) / (p^v - 1) as a double.
inline double chain_factor(std::uint32_t p, std::size_t v, std::size_t w) {
  const long double q = p;
  return static_cast<double>((1.0L - std::pow(q, -static_cast<long double>(w))) / (1.0L - std::pow(q, -static_cast<long double>(v))));
}

/// (p^(w+1) - p) / (p^(w+1) - 1), exactly.
inline Rational plotkin_factor(std::uint32_t p, std::size_t w) {
  const auto top = checked_pow(p, w + 1, std::uint64_t{1} << 62);
  if (!top) throw DimensionError("p^(w+1) does not fit the exact factor");
  const auto t = static_cast<std::int64_t>(*top);
  return Rational(t - p, t - 1);
}

struct HyperplaneResult {
  FpSubspace subspace;
  FpVector functional;
  std::size_t support = 0;
  std::size_t input_support = 0;
  bool bound_certified = false;  // |supp(W)| <= (p^v - p)/(p^v - 1) |supp(V)|
  SearchMode mode = SearchMode::exact;
};

/// A codimension-one subspace of v with small support. Exact mode returns a
/// minimizer over all hyperplanes (ties to the lexicographically first
/// functional). Sampled mode scores `samples` random functionals drawn from
/// `rng` and reports whether the averaging bound was met.
inline HyperplaneResult best_hyperplane(const FpSubspace& v, SearchMode mode = SearchMode::exact,
                                        std::mt19937_64* rng = nullptr, std::size_t samples = 4096) {
  if (v.dim() < 2) throw DimensionError("best_hyperplane needs dim(V) >= 2");
  const auto& p = v.modulus();
  const auto hist = column_classes(v);
  const std::size_t base = subspace_support(v).size();
  FpVector best;
  std::size_t removed = 0;
  if (mode == SearchMode::exact) {
    // largest class, lexicographically first among equals; with no nonzero
    // column every functional removes nothing and (0, ..., 0, 1) is first
    for (const auto& [f, count] : hist)
      if (best.empty() || count > removed) {
        best = f;
        removed = count;
      }
    if (best.empty()) {
      best.assign(v.dim(), 0);
      best.back() = 1;
    }
  } else {
    std::mt19937_64 fallback(0);
    auto& gen = rng ? *rng : fallback;
    std::uniform_int_distribution<Residue> digit(0, p.value() - 1);
    FpVector f(v.dim());
    for (std::size_t s = 0; s < samples; ++s) {
      do {
        for (auto& x : f) x = digit(gen);
      } while (!normalize_projective(f, p));
      auto it = hist.find(f);
      const std::size_t r = it == hist.end() ? 0 : it->second;
      if (best.empty() || r > removed || (r == removed && f < best)) {
        best = f;
        removed = r;
      }
    }
  }
  HyperplaneResult out{hyperplane_of(v, best), best, base - removed, base, false, mode};
  out.bound_certified = chain_bound_holds(p.value(), v.dim(), v.dim() - 1, out.support, base);
  return out;
}

struct ReductionResult {
  FpSubspace subspace;
  std::size_t input_dim = 0;
  std::size_t input_support = 0;
  std::size_t support = 0;
  std::vector<std::size_t> step_supports;  // after each hyperplane step
  double chain_factor = 1.0;               // (p^v - p^(v-w)) / (p^v - 1)
  double uniform_factor = 1.0;             // (p^(w+1) - p) / (p^(w+1) - 1)
  bool chain_bound_met = false;
  bool exact = true;
};

/// Repeated best_hyperplane from dim v down to dim w.
inline ReductionResult reduce_to_dimension(const FpSubspace& v, std::size_t w, SearchMode mode = SearchMode::exact,
                                           std::uint64_t seed = 0) {
  if (w < 1) throw DimensionError("target dimension must be at least 1");
  if (w >= v.dim()) throw DimensionError("target dimension must be below dim(V) = " + std::to_string(v.dim()));
  const auto p = v.modulus().value();
  std::mt19937_64 rng(seed);
  ReductionResult out{v, v.dim(), subspace_support(v).size(), 0, {}, chain_factor(p, v.dim(), w),
                      chain_factor(p, w + 1, w), false, mode == SearchMode::exact};
  while (out.subspace.dim() > w) {
    auto step = best_hyperplane(out.subspace, mode, &rng);
    out.step_supports.push_back(step.support);
    out.subspace = std::move(step.subspace);
  }
  out.support = subspace_support(out.subspace).size();
  out.chain_bound_met = chain_bound_holds(p, v.dim(), w, out.support, out.input_support);
  return out;
}

}  // namespace pdescent
