// Command-line driver for the p-descent library.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdescent/pdescent.hpp"

namespace {

using namespace pdescent;

constexpr int kPrecondition = 2;
constexpr int kBudget = 3;

struct RunConfig {
  std::string input;
  std::optional<std::uint32_t> p;
  std::string series = "derived";
  std::size_t depth = 1;
  std::optional<std::size_t> u;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
  std::string mode = "exact";
  std::string out;
  std::string format = "json";
  // command specific
  std::string weights;
  std::size_t max_i = 8;
  std::size_t w = 1;
  std::string cls;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ReportFormat format_of(const RunConfig& cfg) {
  if (cfg.format == "json" || cfg.format == "json-like" || cfg.format == "structured") return ReportFormat::json;
  if (cfg.format == "table" || cfg.format == "tabular") return ReportFormat::table;
  throw ModeError("unknown format '" + cfg.format + "'");
}

void write_out(const RunConfig& cfg, const std::string& doc) {
  if (cfg.out.empty()) {
    std::cout << doc;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw Error("cannot write " + cfg.out);
  f << doc;
}

PresentationInput load(const RunConfig& cfg) {
  auto in = parse_presentation_file(read_file(cfg.input));
  if (cfg.p) in.p = PrimeModulus(*cfg.p);
  return in;
}

SeriesSpec series_of(const RunConfig& cfg, const PrimeModulus& p) {
  SeriesSpec spec;
  spec.depth = cfg.depth;
  spec.cell_budget = cfg.budget;
  spec.seed = cfg.seed;
  if (cfg.mode == "exact")
    spec.reduce_mode = SearchMode::exact;
  else if (cfg.mode == "heuristic")
    spec.reduce_mode = SearchMode::sampled;
  else
    throw ModeError("unknown mode '" + cfg.mode + "'");
  if (cfg.series == "derived") {
    spec.kind = SeriesKind::derived;
  } else if (cfg.series.rfind("rank:", 0) == 0) {
    spec.kind = SeriesKind::rank;
    try {
      spec.rank_k = std::stoul(cfg.series.substr(5));
    } catch (const std::exception&) {
      throw ModeError("bad series '" + cfg.series + "'");
    }
    if (spec.rank_k < 1) throw ModeError("rank series needs k >= 1");
  } else if (cfg.series.rfind("file:", 0) == 0) {
    spec.kind = SeriesKind::explicit_classes;
    spec.explicit_levels = parse_series_file(read_file(cfg.series.substr(5)), p);
  } else {
    throw ModeError("unknown series '" + cfg.series + "'");
  }
  return spec;
}

std::vector<std::int64_t> integers(const std::string& text) {
  std::vector<std::int64_t> out;
  std::istringstream in(text);
  for (std::string tok; std::getline(in, tok, ',');) {
    std::istringstream words(tok);
    for (std::string w; words >> w;) {
      try {
        out.push_back(std::stoll(w));
      } catch (const std::exception&) {
        throw ParseError("'" + w + "' is not an integer");
      }
    }
  }
  return out;
}

int cmd_descend(const RunConfig& cfg) {
  const auto in = load(cfg);
  const auto spec = series_of(cfg, in.p);
  std::size_t u = 0;
  std::optional<Rational> lambda;
  if (cfg.u) {
    u = *cfg.u;
  } else {
    bool hit = false;
    const auto prefix = build_series_prefix(in.presentation, spec, in.p, &hit);
    const auto params = choose_parameters(in.presentation, prefix);
    u = params.u;
    lambda = params.lambda;
  }
  auto report = run_descent_pipeline(in.presentation, spec, u, in.p);
  if (lambda && !report.lambda_estimate) report.lambda_estimate = lambda;
  write_out(cfg, emit_report(report, format_of(cfg)));
  return report.verdict == Verdict::budget_exhausted ? kBudget : 0;
}

int cmd_cyclic(const RunConfig& cfg) {
  const auto in = load(cfg);
  const auto report = cyclic_growth_report(in.presentation, integers(cfg.weights), in.p, cfg.max_i);
  write_out(cfg, emit_report(report, format_of(cfg)));
  return 0;
}

int cmd_criteria(const RunConfig& cfg) {
  const auto in = load(cfg);
  bool hit = false;
  const auto prefix = build_series_prefix(in.presentation, series_of(cfg, in.p), in.p, &hit);
  std::vector<std::pair<std::uint64_t, std::size_t>> rows;
  for (const auto& r : prefix) rows.emplace_back(r.index, *r.quotient_rank);
  write_out(cfg, emit_report(largeness_criteria_report(rows, in.p), format_of(cfg)));
  return hit ? kBudget : 0;
}

int cmd_reduce(const RunConfig& cfg) {
  const auto v = parse_matrix_file(read_file(cfg.input));
  const auto mode = cfg.mode == "heuristic" ? SearchMode::sampled : SearchMode::exact;
  write_out(cfg, emit_report(reduce_to_dimension(v, cfg.w, mode, cfg.seed), format_of(cfg)));
  return 0;
}

int cmd_cover(const RunConfig& cfg) {
  const auto in = load(cfg);
  const auto t = build_series_tower(in.presentation, series_of(cfg, in.p), in.p);
  Json doc;
  doc["report"] = "cover";
  doc["p"] = in.p.value();
  Json levels = Json::array();
  std::ostringstream table;
  table << "# cover p=" << in.p.value() << '\n';
  table << "   level   index  vertices   edges   faces     d_p  classes idx-bound\n";
  std::uint64_t index = 1;
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    const auto& k = *t.levels[i];
    Json l;
    l["level"] = i + 1;
    l["index"] = index;
    l["vertices"] = k.vertex_count();
    l["edges"] = k.edge_count();
    l["faces"] = k.face_count();
    l["d_p"] = t.bases[i].size();
    l["quotient_rank"] = t.quotient_ranks[i];
    std::string lemma = "-";
    if (i > 0) {
      const auto bound = index_dp_bound(t.bases[i - 1].size(), t.covers[i - 1].degree());
      const bool holds = static_cast<std::int64_t>(t.bases[i].size()) <= bound;
      l["index_dp_bound"] = bound;
      l["index_bound_holds"] = holds;
      lemma = holds ? "ok" : "FAIL";
    }
    table << std::setw(8) << i + 1 << std::setw(8) << index << std::setw(10) << k.vertex_count() << std::setw(8)
          << k.edge_count() << std::setw(8) << k.face_count() << std::setw(8) << t.bases[i].size() << std::setw(9)
          << t.quotient_ranks[i] << std::setw(10) << lemma << '\n';
    levels.push_back(std::move(l));
    if (i < t.covers.size()) index *= t.covers[i].degree();
  }
  doc["levels"] = std::move(levels);
  doc["budget_exhausted"] = t.budget_hit;
  write_out(cfg, format_of(cfg) == ReportFormat::json ? doc.dump(2) + "\n" : table.str());
  return t.budget_hit ? kBudget : 0;
}

const TwoComplex& level_complex(const SeriesTower& t, std::size_t depth) {
  if (t.levels.size() < depth) throw EnumerationRefused("level " + std::to_string(depth) + " exceeds the cell budget");
  return *t.levels[depth - 1];
}

int cmd_cheeger(const RunConfig& cfg) {
  const auto in = load(cfg);
  const auto t = build_series_tower(in.presentation, series_of(cfg, in.p), in.p);
  if (t.budget_hit) {
    std::cerr << "error: level " << cfg.depth << " exceeds the cell budget\n";
    return kBudget;
  }
  const auto g = SkeletonGraph::from_complex(level_complex(t, cfg.depth));
  const auto mode = cfg.mode == "heuristic" ? CheegerMode::heuristic : CheegerMode::exact;
  write_out(cfg, emit_report(cheeger_constant(g, mode), format_of(cfg)));
  return 0;
}

int cmd_relsize(const RunConfig& cfg) {
  const auto in = load(cfg);
  const auto t = build_series_tower(in.presentation, series_of(cfg, in.p), in.p);
  if (t.budget_hit) {
    std::cerr << "error: level " << cfg.depth << " exceeds the cell budget\n";
    return kBudget;
  }
  const auto& k = level_complex(t, cfg.depth);
  const auto mode = cfg.mode == "heuristic" ? RelsizeMode::upper : RelsizeMode::exact;
  std::vector<Cochain> targets;
  if (!cfg.cls.empty()) {
    Cochain c;
    for (auto x : integers(cfg.cls)) c.values.push_back(in.p.reduce(x));
    if (c.values.size() != k.edge_count()) throw DimensionError("class has the wrong number of entries");
    targets.push_back(std::move(c));
  } else {
    targets = t.bases[cfg.depth - 1];
  }
  Json doc = Json::array();
  std::string table;
  for (const auto& c : targets) {
    const auto r = relative_size(k, c, in.p, mode);
    doc.push_back(to_json(r));
    table += to_table(r);
  }
  write_out(cfg, format_of(cfg) == ReportFormat::json ? doc.dump(2) + "\n" : table);
  return 0;
}

int cmd_echo(const RunConfig& cfg) {
  const auto in = load(cfg);
  write_out(cfg, write_presentation_file(in.presentation, in.p));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-descent: abelian p-covers, wedge cocycles and support reduction"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool tower) {
    sub->add_option("input", cfg.input, "input file")->required();
    sub->add_option("--p", cfg.p, "prime overriding the file");
    sub->add_option("--seed", cfg.seed, "seed for all randomness");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "json | table");
    sub->add_option("--mode", cfg.mode, "exact | heuristic");
    if (tower) {
      sub->add_option("--series", cfg.series, "derived | rank:k | file:<path>");
      sub->add_option("--depth", cfg.depth, "levels")->check(CLI::PositiveNumber);
      sub->add_option("--budget", cfg.budget, "cell budget");
    }
  };

  auto* descend = app.add_subcommand("descend", "support-decay pipeline along an abelian p-series");
  common(descend, true);
  descend->add_option("--u", cfg.u, "family size (default from the lambda estimate)");
  auto* cyclic = app.add_subcommand("cyclic", "d_p growth along cyclic covers");
  common(cyclic, false);
  cyclic->add_option("--weights", cfg.weights, "integer weight per generator")->required();
  cyclic->add_option("--max-i", cfg.max_i, "largest cover degree");
  auto* criteria = app.add_subcommand("criteria", "prefix report for the largeness criteria");
  common(criteria, true);
  auto* reduce = app.add_subcommand("reduce", "small-support subspace of a matrix row space");
  common(reduce, false);
  reduce->add_option("--w", cfg.w, "target dimension")->required();
  auto* cheeger = app.add_subcommand("cheeger", "Cheeger constant of a level's 1-skeleton");
  common(cheeger, true);
  auto* relsize = app.add_subcommand("relsize", "relative size of classes at a level");
  common(relsize, true);
  relsize->add_option("--class", cfg.cls, "cochain values; default: every basis class");
  auto* cover = app.add_subcommand("cover", "build the series and print cover statistics");
  common(cover, true);
  auto* echo = app.add_subcommand("echo", "reprint a presentation file");
  common(echo, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kPrecondition;
  }

  try {
    if (descend->parsed()) return cmd_descend(cfg);
    if (cyclic->parsed()) return cmd_cyclic(cfg);
    if (criteria->parsed()) return cmd_criteria(cfg);
    if (reduce->parsed()) return cmd_reduce(cfg);
    if (cheeger->parsed()) return cmd_cheeger(cfg);
    if (relsize->parsed()) return cmd_relsize(cfg);
    if (cover->parsed()) return cmd_cover(cfg);
    if (echo->parsed()) return cmd_echo(cfg);
  } catch (const EnumerationRefused& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  }
  return kPrecondition;
}
