#pragma once

// Text input formats and report emission.
//
// Presentation files are line oriented:
//   p = <prime>
//   gens = a b c
//   rel = <word>        (repeatable; uppercase letters are inverses)
// Blank lines and '#' comments are ignored.
//
// Matrix files (standalone reduction) hold `p = <prime>` followed by one
// row of residues per line. Series files list explicit covering classes:
//   level <i>
//   class <one residue per edge of K_i>

#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdescent/complex.hpp"
#include "pdescent/errors.hpp"
#include "pdescent/fp_linalg.hpp"
#include "pdescent/reduce.hpp"
#include "pdescent/tau.hpp"
#include "pdescent/tower.hpp"

namespace pdescent {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/// Splits "key = value"; returns nullopt when there is no '='.
inline std::optional<std::pair<std::string, std::string>> key_value(const std::string& line) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) return std::nullopt;
  return std::make_pair(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
}

inline std::string strip_comment(const std::string& line) { return trim(line.substr(0, line.find('#'))); }

inline std::uint32_t parse_prime(const std::string& value, std::size_t line) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(value, &used);
  } catch (const std::exception&) {
    throw ParseError("'" + value + "' is not an integer", line);
  }
  if (used != value.size()) throw ParseError("'" + value + "' is not an integer", line);
  if (!PrimeModulus::is_prime(static_cast<std::uint32_t>(v)) || v > PrimeModulus::kMax)
    throw ParseError("modulus " + value + " is not a prime in [2, 65536]", line);
  return static_cast<std::uint32_t>(v);
}

inline std::vector<std::int64_t> parse_integers(const std::string& text, std::size_t line) {
  std::vector<std::int64_t> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(tok, &used));
    } catch (const std::exception&) {
      throw ParseError("'" + tok + "' is not an integer", line);
    }
    if (used != tok.size()) throw ParseError("'" + tok + "' is not an integer", line);
  }
  return out;
}

}  // namespace detail

struct PresentationInput {
  GroupPresentation presentation;
  PrimeModulus p;
};

inline PresentationInput parse_presentation_file(const std::string& text) {
  std::optional<std::uint32_t> p;
  std::optional<std::vector<char>> gens;
  std::vector<std::pair<std::string, std::size_t>> rels;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = detail::strip_comment(raw);
    if (s.empty()) continue;
    const auto kv = detail::key_value(s);
    if (!kv) throw ParseError("expected 'key = value'", line);
    const auto& [key, value] = *kv;
    if (key == "p") {
      if (p) throw ParseError("p given twice", line);
      p = detail::parse_prime(value, line);
    } else if (key == "gens") {
      if (gens) throw ParseError("gens given twice", line);
      gens.emplace();
      std::istringstream g(value);
      std::string tok;
      while (g >> tok) {
        if (tok.size() != 1 || !std::islower(static_cast<unsigned char>(tok[0])))
          throw ParseError("generator '" + tok + "' is not a single lowercase letter", line);
        gens->push_back(tok[0]);
      }
    } else if (key == "rel") {
      if (value.empty()) throw ParseError("empty relator", line);
      rels.emplace_back(value, line);
    } else {
      throw ParseError("unknown key '" + key + "'", line);
    }
  }
  if (!p) throw ParseError("missing 'p = <prime>'");
  if (!gens || gens->empty()) throw ParseError("missing 'gens = ...'");
  std::vector<std::string> words;
  for (const auto& [w, l] : rels) {
    try {
      GroupPresentation({*gens}, {w});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), l);
    }
    words.push_back(w);
  }
  try {
    return {GroupPresentation(*gens, std::move(words)), PrimeModulus(*p)};
  } catch (const ParseError& e) {
    throw ParseError(e.what());
  }
}

/// Inverse of parse_presentation_file up to comments and spacing.
inline std::string write_presentation_file(const GroupPresentation& pres, const PrimeModulus& p) {
  std::ostringstream out;
  out << "p = " << p.value() << "\ngens =";
  for (char g : pres.generators()) out << ' ' << g;
  out << '\n';
  for (const auto& r : pres.relators()) out << "rel = " << r << '\n';
  return out.str();
}

inline FpSubspace parse_matrix_file(const std::string& text) {
  std::optional<PrimeModulus> p;
  std::vector<FpVector> rows;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  std::size_t width = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = detail::strip_comment(raw);
    if (s.empty()) continue;
    if (auto kv = detail::key_value(s)) {
      if (kv->first != "p") throw ParseError("unknown key '" + kv->first + "'", line);
      p.emplace(detail::parse_prime(kv->second, line));
      continue;
    }
    if (!p) throw ParseError("'p = <prime>' must precede the rows", line);
    FpVector row;
    for (auto x : detail::parse_integers(s, line)) row.push_back(p->reduce(x));
    if (rows.empty()) width = row.size();
    if (row.size() != width) throw ParseError("row length differs from the first row", line);
    rows.push_back(std::move(row));
  }
  if (!p) throw ParseError("missing 'p = <prime>'");
  if (rows.empty()) throw ParseError("matrix has no rows");
  return FpSubspace::span(rows, width, *p);
}

/// Explicit covering classes per level; widths are checked when the tower is built.
inline std::vector<std::vector<Cochain>> parse_series_file(const std::string& text, const PrimeModulus& p) {
  std::vector<std::vector<Cochain>> levels;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = detail::strip_comment(raw);
    if (s.empty()) continue;
    std::istringstream words(s);
    std::string head;
    words >> head;
    std::string rest;
    std::getline(words, rest);
    if (head == "level") {
      const auto n = detail::parse_integers(rest, line);
      if (n.size() != 1 || n[0] != static_cast<std::int64_t>(levels.size()) + 1)
        throw ParseError("levels must be numbered 1, 2, ... in order", line);
      levels.emplace_back();
    } else if (head == "class") {
      if (levels.empty()) throw ParseError("'class' before any 'level'", line);
      Cochain c;
      for (auto x : detail::parse_integers(rest, line)) c.values.push_back(p.reduce(x));
      levels.back().push_back(std::move(c));
    } else {
      throw ParseError("expected 'level' or 'class'", line);
    }
  }
  return levels;
}

enum class ReportFormat { json, table };

inline Json rational_json(const Rational& r) {
  Json j;
  j["num"] = r.numerator();
  j["den"] = r.denominator();
  j["value"] = static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
  return j;
}

inline std::string rational_text(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, Rational>)
    return rational_json(*v);
  else
    return Json(*v);
}

inline Json to_json(const DescentReport& r) {
  Json j;
  j["report"] = "descent";
  j["p"] = r.p;
  j["u"] = r.u;
  j["lambda_estimate"] = optional_json(r.lambda_estimate);
  Json levels = Json::array();
  for (const auto& x : r.records) {
    Json l;
    l["level"] = x.level;
    l["index"] = x.index;
    l["quotient_rank"] = optional_json(x.quotient_rank);
    l["d_p"] = x.d_p;
    l["supp"] = optional_json(x.support);
    l["edges"] = x.edges;
    l["faces"] = x.faces;
    l["relsize_upper"] = optional_json(x.relsize_upper);
    l["bound_factor"] = optional_json(x.bound_factor);
    l["reduction_exact"] = optional_json(x.reduction_exact);
    l["wedge_count"] = optional_json(x.wedge_count);
    l["wedge_bound"] = optional_json(x.wedge_bound);
    l["classes_independent"] = optional_json(x.classes_independent);
    l["arithmetic_lemma"] = optional_json(x.arithmetic_lemma);
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  j["verdict"] = to_string(r.verdict);
  j["note"] = r.note;
  return j;
}

inline Json to_json(const CyclicGrowthReport& r) {
  Json j;
  j["report"] = "cyclic";
  j["p"] = r.p;
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back({{"i", e.i}, {"d_p", e.d_p}, {"ratio", rational_json(e.ratio)}});
  j["entries"] = std::move(entries);
  j["fitted_k"] = r.fitted_k;
  j["limit_estimate"] = rational_json(r.limit.estimate);
  j["limit_lower"] = rational_json(r.limit.lower);
  j["limit_upper"] = rational_json(r.limit.upper);
  j["bounded"] = r.limit.bounded;
  j["positive_limit_signal"] = r.positive_limit_signal;
  j["note"] = r.note;
  return j;
}

inline Json to_json(const CriteriaReport& r) {
  Json j;
  j["report"] = "criteria";
  j["p"] = r.p;
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.indices.size(); ++i)
    rows.push_back({{"index", r.indices[i]},
                    {"quotient_rank", r.quotient_ranks[i]},
                    {"log_index_ratio", r.log_index_ratio[i]},
                    {"rank_ratio", rational_json(r.rank_ratio[i])},
                    {"running_infimum", rational_json(r.running_infimum[i])}});
  j["levels"] = std::move(rows);
  j["abelian_quotients"] = r.abelian_quotients;
  j["log_ratio_growing"] = r.log_ratio_growing;
  j["rank_ratio_positive"] = r.rank_ratio_positive;
  j["note"] = r.note;
  return j;
}

inline Json to_json(const ReductionResult& r) {
  Json j;
  j["report"] = "reduce";
  j["p"] = r.subspace.modulus().value();
  j["input_dim"] = r.input_dim;
  j["input_support"] = r.input_support;
  j["dim"] = r.subspace.dim();
  j["support"] = r.support;
  j["step_supports"] = r.step_supports;
  j["chain_factor"] = r.chain_factor;
  j["uniform_factor"] = r.uniform_factor;
  j["chain_bound_met"] = r.chain_bound_met;
  j["exact"] = r.exact;
  Json basis = Json::array();
  for (std::size_t i = 0; i < r.subspace.dim(); ++i) basis.push_back(r.subspace.basis().row_vector(i));
  j["basis"] = std::move(basis);
  return j;
}

inline Json to_json(const CheegerResult& r) {
  Json j;
  j["report"] = "cheeger";
  j["value"] = rational_json(r.value);
  j["exact"] = r.exact;
  j["witness"] = r.witness;
  return j;
}

inline Json to_json(const RelsizeResult& r) {
  Json j;
  j["report"] = "relsize";
  j["value"] = rational_json(r.value);
  j["support"] = r.support;
  j["exact"] = r.exact;
  j["representative"] = r.representative.values;
  return j;
}

inline Json to_json(const CutCheckReport& r) {
  Json j;
  j["report"] = "lemma43";
  j["cheeger"] = rational_json(r.cheeger);
  j["cheeger_exact"] = r.cheeger_exact;
  j["relsize"] = rational_json(r.relsize);
  j["rhs"] = rational_json(r.rhs);
  j["holds"] = r.holds;
  j["value_class_sizes"] = r.value_class_sizes;
  j["fiber_counts_ok"] = r.fiber_counts_ok;
  j["cut_boundary"] = r.cut_boundary;
  j["cut_boundary_bound"] = r.cut_boundary_bound;
  return j;
}

namespace detail {

inline std::string cell(const std::string& s, int width) {
  std::ostringstream o;
  o << std::setw(width) << s;
  return o.str();
}

template <class T>
std::string opt_text(const std::optional<T>& v) {
  if (!v) return "-";
  if constexpr (std::is_same_v<T, Rational>)
    return rational_text(*v);
  else if constexpr (std::is_same_v<T, bool>)
    return *v ? "yes" : "no";
  else
    return std::to_string(*v);
}

}  // namespace detail

inline std::string to_table(const DescentReport& r) {
  std::ostringstream o;
  o << "# descent p=" << r.p << " u=" << r.u
    << " lambda=" << (r.lambda_estimate ? rational_text(*r.lambda_estimate) : "-") << '\n';
  const char* heads[] = {"level", "index", "n_i", "d_p", "supp", "edges", "relsize", "factor", "wedges", "bound"};
  for (const char* h : heads) o << detail::cell(h, 10);
  o << '\n';
  for (const auto& x : r.records) {
    o << detail::cell(std::to_string(x.level), 10) << detail::cell(std::to_string(x.index), 10)
      << detail::cell(detail::opt_text(x.quotient_rank), 10) << detail::cell(std::to_string(x.d_p), 10)
      << detail::cell(detail::opt_text(x.support), 10) << detail::cell(std::to_string(x.edges), 10)
      << detail::cell(detail::opt_text(x.relsize_upper), 10) << detail::cell(detail::opt_text(x.bound_factor), 10)
      << detail::cell(detail::opt_text(x.wedge_count), 10) << detail::cell(detail::opt_text(x.wedge_bound), 10) << '\n';
  }
  o << "verdict: " << to_string(r.verdict) << '\n';
  return o.str();
}

inline std::string to_table(const CyclicGrowthReport& r) {
  std::ostringstream o;
  o << "# cyclic p=" << r.p << " k=" << r.fitted_k << '\n';
  o << detail::cell("i", 8) << detail::cell("d_p", 8) << detail::cell("d_p/i", 10) << '\n';
  for (const auto& e : r.entries)
    o << detail::cell(std::to_string(e.i), 8) << detail::cell(std::to_string(e.d_p), 8)
      << detail::cell(rational_text(e.ratio), 10) << '\n';
  o << "limit in [" << rational_text(r.limit.lower) << ", " << rational_text(r.limit.upper)
    << "], estimate " << rational_text(r.limit.estimate) << '\n';
  o << "signal: " << (r.positive_limit_signal ? "positive" : "none") << '\n';
  return o.str();
}

inline std::string to_table(const CriteriaReport& r) {
  std::ostringstream o;
  o << "# criteria p=" << r.p << '\n';
  o << detail::cell("index", 10) << detail::cell("n_i", 8) << detail::cell("log-ratio", 12) << detail::cell("n/index", 10)
    << detail::cell("inf", 10) << '\n';
  for (std::size_t i = 0; i < r.indices.size(); ++i) {
    std::ostringstream lr;
    lr << std::fixed << std::setprecision(6) << r.log_index_ratio[i];
    o << detail::cell(std::to_string(r.indices[i]), 10) << detail::cell(std::to_string(r.quotient_ranks[i]), 8)
      << detail::cell(lr.str(), 12) << detail::cell(rational_text(r.rank_ratio[i]), 10)
      << detail::cell(rational_text(r.running_infimum[i]), 10) << '\n';
  }
  o << "(i) " << (r.abelian_quotients ? "yes" : "no") << "  (ii) " << (r.log_ratio_growing ? "yes" : "no")
    << "  (iii) " << (r.rank_ratio_positive ? "yes" : "no") << '\n';
  return o.str();
}

inline std::string to_table(const ReductionResult& r) {
  std::ostringstream o;
  o << "# reduce p=" << r.subspace.modulus().value() << " v=" << r.input_dim << " w=" << r.subspace.dim() << '\n';
  o << "support " << r.input_support << " -> " << r.support << "  chain factor " << r.chain_factor
    << "  bound met: " << (r.chain_bound_met ? "yes" : "no") << '\n';
  for (std::size_t i = 0; i < r.subspace.dim(); ++i) {
    for (auto x : r.subspace.basis().row(i)) o << ' ' << x;
    o << '\n';
  }
  return o.str();
}

inline std::string to_table(const CheegerResult& r) {
  return std::string("cheeger ") + rational_text(r.value) + (r.exact ? " (exact)\n" : " (upper bound)\n");
}

inline std::string to_table(const RelsizeResult& r) {
  return "relsize " + rational_text(r.value) + " support " + std::to_string(r.support) +
         (r.exact ? " (exact)\n" : " (upper bound)\n");
}

inline std::string to_table(const CutCheckReport& r) {
  return "h " + rational_text(r.cheeger) + " <= " + rational_text(r.rhs) + ": " + (r.holds ? "yes" : "no") + '\n';
}

/// Renders any report; structured output is deterministic for fixed inputs.
template <class Report>
std::string emit_report(const Report& r, ReportFormat format) {
  return format == ReportFormat::json ? to_json(r).dump(2) + "\n" : to_table(r);
}

}  // namespace pdescent
