#pragma once

#include <memory>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pdescent/pdescent.hpp"

namespace fixtures {

using namespace pdescent;

inline GroupPresentation wedge(std::size_t n) {
  std::vector<char> gens;
  for (std::size_t i = 0; i < n; ++i) gens.push_back(static_cast<char>('a' + i));
  return GroupPresentation(gens, {});
}

inline GroupPresentation torus() { return GroupPresentation({'a', 'b'}, {"abAB"}); }
inline GroupPresentation genus2() { return GroupPresentation({'a', 'b', 'c', 'd'}, {"abABcdCD"}); }

inline std::shared_ptr<const TwoComplex> complex_of(const GroupPresentation& pres) {
  return std::make_shared<const TwoComplex>(build_presentation_complex(pres));
}

inline oracle::Complex plain(const TwoComplex& k) {
  oracle::Complex out;
  out.vertices = k.vertex_count();
  for (const auto& e : k.edges()) out.edges.emplace_back(e.from, e.to);
  for (const auto& f : k.faces()) {
    std::vector<oracle::Step> path;
    for (const auto& s : f.steps) path.push_back({s.edge, s.dir});
    out.faces.push_back(std::move(path));
  }
  return out;
}

/// (d_p(base) - 1) * degree + 1 <= d_p(total)
inline bool index_bound_holds(const CoveringMap& cov, const PrimeModulus& p) {
  return static_cast<std::int64_t>(homology_dim_p(cov.total(), p)) <=
         index_dp_bound(homology_dim_p(cov.base(), p), cov.degree());
}

/// Path spelling a word in the generators of a one-vertex complex.
inline EdgePath word_path(const GroupPresentation& pres, const std::string& word) {
  return EdgePath{0, pres.spell(word)};
}

inline std::string random_word(std::mt19937_64& rng, const GroupPresentation& pres, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::size_t> gen(0, pres.generators().size() - 1);
  std::bernoulli_distribution inv(0.5);
  std::string w;
  for (std::size_t i = len(rng); i > 0; --i) {
    char c = pres.generators()[gen(rng)];
    w.push_back(inv(rng) ? static_cast<char>(c - 'a' + 'A') : c);
  }
  return w;
}

}  // namespace fixtures
