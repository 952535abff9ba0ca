#pragma once

// Brute-force reference computations for the test suites. Everything here
// enumerates; nothing calls into the library's algorithms.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<std::uint32_t>;

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

/// Calls fn on every vector of F_p^n in base-p counting order.
inline void for_each_vector(std::uint32_t p, std::size_t n, const std::function<void(const Vec&)>& fn) {
  Vec x(n, 0);
  const auto total = ipow(p, n);
  for (std::uint64_t i = 0; i < total; ++i) {
    fn(x);
    for (std::size_t k = 0; k < n; ++k) {
      if (++x[k] < p) break;
      x[k] = 0;
    }
  }
}

inline Vec combo(const std::vector<Vec>& gens, const Vec& coeff, std::uint32_t p, std::size_t n) {
  Vec out(n, 0);
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t e = 0; e < n; ++e) out[e] = static_cast<std::uint32_t>((out[e] + std::uint64_t{coeff[g]} * gens[g][e]) % p);
  return out;
}

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
}

/// Every element of the span of gens, as a set.
inline std::set<Vec> span_elements(const std::vector<Vec>& gens, std::uint32_t p, std::size_t n) {
  std::set<Vec> out;
  for_each_vector(p, gens.size(), [&](const Vec& c) { out.insert(combo(gens, c, p, n)); });
  return out;
}

/// Rank as log_p of the span size.
inline std::size_t rank(const std::vector<Vec>& rows, std::uint32_t p, std::size_t n) {
  auto size = span_elements(rows, p, n).size();
  std::size_t r = 0;
  while (size > 1) {
    size /= p;
    ++r;
  }
  return r;
}

/// Largest subset of rows with no nontrivial vanishing combination.
inline std::size_t rank_by_subsets(const std::vector<Vec>& rows, std::uint32_t p, std::size_t n) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << rows.size()); ++mask) {
    std::vector<Vec> sub;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (mask >> i & 1) sub.push_back(rows[i]);
    bool independent = true;
    for_each_vector(p, sub.size(), [&](const Vec& c) {
      if (!is_zero(c) && is_zero(combo(sub, c, p, n))) independent = false;
    });
    if (independent) best = std::max(best, sub.size());
  }
  return best;
}

inline std::set<std::size_t> support_of(const std::set<Vec>& elements) {
  std::set<std::size_t> out;
  for (const auto& v : elements)
    for (std::size_t e = 0; e < v.size(); ++e)
      if (v[e]) out.insert(e);
  return out;
}

inline std::size_t weight(const Vec& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](std::uint32_t x) { return x != 0; }));
}

/// Supports of all hyperplanes of span(gens), gens independent. Each
/// hyperplane appears once.
inline std::vector<std::size_t> hyperplane_supports(const std::vector<Vec>& gens, std::uint32_t p, std::size_t n) {
  const std::size_t v = gens.size();
  std::vector<Vec> coords;
  std::vector<std::uint64_t> masks;
  for_each_vector(p, v, [&](const Vec& c) {
    coords.push_back(c);
    const Vec x = combo(gens, c, p, n);
    std::uint64_t m = 0;
    for (std::size_t e = 0; e < n; ++e)
      if (x[e]) m |= std::uint64_t{1} << e;
    masks.push_back(m);
  });
  std::vector<std::size_t> out;
  for_each_vector(p, v, [&](const Vec& f) {
    // first nonzero entry 1 picks one functional per hyperplane
    auto it = std::find_if(f.begin(), f.end(), [](std::uint32_t x) { return x != 0; });
    if (it == f.end() || *it != 1) return;
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      std::uint64_t dot = 0;
      for (std::size_t k = 0; k < v; ++k) dot += std::uint64_t{f[k]} * coords[i][k];
      if (dot % p == 0) m |= masks[i];
    }
    out.push_back(static_cast<std::size_t>(std::popcount(m)));
  });
  return out;
}

/// Min weight over the nonzero elements of span(gens) (one-dimensional subspaces).
inline std::size_t min_line_support(const std::vector<Vec>& gens, std::uint32_t p, std::size_t n) {
  std::size_t best = n + 1;
  for_each_vector(p, gens.size(), [&](const Vec& c) {
    if (is_zero(c)) return;
    const Vec x = combo(gens, c, p, n);
    if (!is_zero(x)) best = std::min(best, weight(x));
  });
  return best;
}

// ---- complexes as plain data

struct Step {
  std::size_t edge;
  int dir;
};

struct Complex {
  std::size_t vertices = 1;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<Step>> faces;
};

inline std::int64_t eval(const Vec& c, const std::vector<Step>& path, std::uint32_t p) {
  std::int64_t acc = 0;
  for (const auto& s : path) acc += s.dir * static_cast<std::int64_t>(c[s.edge]);
  return ((acc % p) + p) % p;
}

inline bool is_cocycle(const Complex& k, const Vec& c, std::uint32_t p) {
  return std::all_of(k.faces.begin(), k.faces.end(), [&](const auto& f) { return eval(c, f, p) == 0; });
}

inline Vec coboundary(const Complex& k, const Vec& phi, std::uint32_t p) {
  Vec c(k.edges.size());
  for (std::size_t e = 0; e < k.edges.size(); ++e) c[e] = (phi[k.edges[e].second] + p - phi[k.edges[e].first]) % p;
  return c;
}

/// d_p = log_p(|Z^1| / |B^1|) by counting both sets.
inline std::size_t homology_dim(const Complex& k, std::uint32_t p) {
  std::uint64_t z = 0;
  for_each_vector(p, k.edges.size(), [&](const Vec& c) { z += is_cocycle(k, c, p); });
  std::set<Vec> b;
  for_each_vector(p, k.vertices, [&](const Vec& phi) { b.insert(coboundary(k, phi, p)); });
  std::uint64_t q = z / b.size();
  std::size_t d = 0;
  while (q > 1) {
    q /= p;
    ++d;
  }
  return d;
}

inline bool is_coboundary(const Complex& k, const Vec& c, std::uint32_t p) {
  bool found = false;
  for_each_vector(p, k.vertices, [&](const Vec& phi) {
    if (!found && coboundary(k, phi, p) == c) found = true;
  });
  return found;
}

/// Classes of cs are independent in H^1: no nontrivial combination is a coboundary.
inline bool independent_classes(const Complex& k, const std::vector<Vec>& cs, std::uint32_t p) {
  bool ok = true;
  for_each_vector(p, cs.size(), [&](const Vec& coeff) {
    if (ok && !is_zero(coeff) && is_coboundary(k, combo(cs, coeff, p, k.edges.size()), p)) ok = false;
  });
  return ok;
}

inline std::size_t components(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::size_t count = n;
  for (auto [a, b] : edges) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent[a] = b;
      --count;
    }
  }
  return count;
}

/// Abelian p-cover of a one-vertex complex, the shift of generator g being
/// shifts[g] in F_p^n. Vertex L has index sum L_j p^(n-1-j).
inline Complex one_vertex_cover(const Complex& base, const std::vector<Vec>& shifts, std::uint32_t p) {
  const std::size_t n = shifts.empty() ? 0 : shifts[0].size();
  const auto deg = ipow(p, n);
  auto index = [&](const Vec& l) {
    std::size_t i = 0;
    for (auto x : l) i = i * p + x;
    return i;
  };
  auto label = [&](std::size_t i) {
    Vec l(n);
    for (std::size_t j = n; j-- > 0;) {
      l[j] = static_cast<std::uint32_t>(i % p);
      i /= p;
    }
    return l;
  };
  auto moved = [&](Vec l, std::size_t g, int dir) {
    for (std::size_t j = 0; j < n; ++j) l[j] = static_cast<std::uint32_t>((l[j] + (dir > 0 ? shifts[g][j] : p - shifts[g][j])) % p);
    return l;
  };
  Complex out;
  out.vertices = deg;
  for (std::size_t g = 0; g < base.edges.size(); ++g)
    for (std::size_t i = 0; i < deg; ++i) out.edges.emplace_back(i, index(moved(label(i), g, 1)));
  // edge (g, L) has index g*deg + L
  for (const auto& f : base.faces)
    for (std::size_t i = 0; i < deg; ++i) {
      Vec l = label(i);
      std::vector<Step> path;
      for (const auto& s : f) {
        if (s.dir > 0) {
          path.push_back({s.edge * deg + index(l), 1});
          l = moved(l, s.edge, 1);
        } else {
          l = moved(l, s.edge, -1);
          path.push_back({s.edge * deg + index(l), -1});
        }
      }
      out.faces.push_back(std::move(path));
    }
  return out;
}

// ---- graphs

/// min |dA| / |A| over 1 <= |A| <= n/2, as (boundary, size).
inline std::pair<std::int64_t, std::int64_t> cheeger(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::pair<std::int64_t, std::int64_t> best{-1, 1};
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const auto a = std::popcount(mask);
    if (static_cast<std::size_t>(2 * a) > n) continue;
    std::int64_t b = 0;
    for (auto [u, v] : edges)
      if (((mask >> u) & 1) != ((mask >> v) & 1)) ++b;
    if (best.first < 0 || b * best.second < best.first * a) best = {b, a};
  }
  return best;
}

/// min |supp(alpha + delta phi)| over all potentials.
inline std::size_t min_support(const Complex& k, const Vec& alpha, std::uint32_t p) {
  std::size_t best = alpha.size() + 1;
  for_each_vector(p, k.vertices, [&](const Vec& phi) {
    const Vec d = coboundary(k, phi, p);
    std::size_t s = 0;
    for (std::size_t e = 0; e < alpha.size(); ++e) s += (alpha[e] + d[e]) % p != 0;
    best = std::min(best, s);
  });
  return best;
}

// ---- random data

inline std::vector<Vec> random_rows(std::mt19937_64& rng, std::uint32_t p, std::size_t rows, std::size_t n) {
  std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
  std::vector<Vec> out(rows, Vec(n));
  for (auto& r : out)
    for (auto& x : r) x = d(rng);
  return out;
}

/// `dim` independent rows in F_p^n (dim <= n).
inline std::vector<Vec> random_independent(std::mt19937_64& rng, std::uint32_t p, std::size_t dim, std::size_t n) {
  for (;;) {
    auto rows = random_rows(rng, p, dim, n);
    if (span_elements(rows, p, n).size() == ipow(p, dim)) return rows;
  }
}

}  // namespace oracle
