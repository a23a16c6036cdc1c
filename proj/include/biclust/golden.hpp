#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "biclust/bicluster.hpp"
#include "biclust/concepts.hpp"
#include "biclust/context.hpp"
#include "biclust/discretize.hpp"
#include "biclust/error.hpp"
#include "biclust/matrix.hpp"
#include "biclust/measures.hpp"
#include "biclust/pipelines.hpp"
#include "biclust/rules.hpp"

/// Worked examples replayed end to end, with their expected intermediate tables.
namespace biclust::golden {

using Grid = std::vector<std::vector<int>>;

inline std::vector<std::string> labels(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline ExpressionMatrix matrix(const std::vector<std::vector<double>>& rows) {
  return ExpressionMatrix(labels("g", rows.size()), labels("c", rows.front().size()), rows);
}

// 6 x 6 example shared by the BiARM, BiFCA+ and BiFCA walkthroughs.
inline ExpressionMatrix six_matrix() {
  return matrix({{10, 20, 5, 15, 0, 18},
                 {20, 30, 15, 25, 26, 25},
                 {23, 12, 8, 15, 20, 50},
                 {30, 40, 25, 35, 35, 15},
                 {13, 13, 18, 25, 30, 55},
                 {20, 20, 15, 8, 12, 23}});
}

inline const Grid& six_all_pairs_trajectory() {
  static const Grid g{{1, -1, 1, -1, 1, -1, -1, -1, -1, 1, -1, 1, -1, 1, 1},
                      {1, -1, 1, 1, 1, -1, -1, -1, -1, 1, 1, 1, 1, 0, -1},
                      {-1, -1, -1, -1, 1, -1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
                      {1, -1, 1, 1, -1, -1, -1, -1, -1, 1, 1, -1, 0, -1, -1},
                      {0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
                      {0, -1, -1, -1, 1, -1, -1, -1, 1, -1, -1, 1, 1, 1, 1}};
  return g;
}

inline const Grid& six_all_pairs_binary() {
  static const Grid g{{0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0},
                      {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1},
                      {0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0},
                      {0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 1},
                      {1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
                      {1, 0, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0}};
  return g;
}

inline const Grid& six_adjacent_trajectory() {
  static const Grid g{{1, -1, 1, -1, 1},
                      {1, -1, 1, 1, -1},
                      {-1, -1, 1, 1, 1},
                      {1, -1, 1, 0, -1},
                      {0, 1, 1, 1, 1},
                      {0, -1, -1, 1, 1}};
  return g;
}

inline const Grid& six_adjacent_binary() {
  static const Grid g{{0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 0},
                      {0, 0, 0, 0, 1}, {1, 1, 0, 0, 0}, {1, 0, 1, 0, 0}};
  return g;
}

/// Expected concept as 1-based gene and column numbers.
struct ConceptSpec {
  std::vector<std::size_t> genes;
  std::vector<std::size_t> columns;
};

inline const std::vector<ConceptSpec>& six_adjacent_concepts() {
  static const std::vector<ConceptSpec> c{{{5, 6}, {1}}, {{2, 4}, {5}}, {{5}, {1, 2}}, {{6}, {1, 3}}, {{1}, {4}}};
  return c;
}

inline const std::vector<ConceptSpec>& six_all_pairs_concepts() {
  static const std::vector<ConceptSpec> c{
      {{1, 3, 6}, {4}},          {{1, 2, 4}, {9}},         {{5, 6}, {1}},
      {{3, 6}, {3, 4}},          {{3, 5}, {7, 8}},         {{3}, {3, 4, 7, 8}},
      {{1, 6}, {4, 11}},         {{2, 4}, {9, 15}},        {{5}, {1, 2, 6, 7, 8}},
      {{6}, {1, 3, 4, 10, 11}},  {{1}, {4, 9, 11, 13}},    {{4}, {5, 9, 12, 14, 15}}};
  return c;
}

/// Rule premise => conclusion over 1-based column numbers.
struct RuleSpec {
  std::vector<std::size_t> premise;
  std::vector<std::size_t> conclusion;
};

inline const std::vector<RuleSpec>& six_rules() {
  static const std::vector<RuleSpec> r{{{3}, {4}}, {{7}, {8}}, {{11}, {4}}, {{8}, {7}}, {{15}, {9}}};
  return r;
}

// 5 x 7 NBic-ARM example.
inline ExpressionMatrix nbic_matrix() {
  return matrix({{10, 20, 8, 12, 9, 16, 10},
                 {5, 10, 6, 14, 8, 18, 9},
                 {2, 2, 2, 2, 2, 2, 2},
                 {20, 10, 14, 9, 16, 10, 13},
                 {10, 5, 8, 5, 10, 9, 11}});
}

inline const Grid& nbic_trajectory() {
  static const Grid g{{1, -1, 1, -1, 1, -1},
                      {1, -1, 1, -1, 1, -1},
                      {0, 0, 0, 0, 0, 0},
                      {-1, 1, -1, 1, -1, 1},
                      {-1, 1, -1, 1, -1, 1}};
  return g;
}

inline const Grid& nbic_positive() {
  static const Grid g{{1, 0, 1, 0, 1, 0}, {1, 0, 1, 0, 1, 0}, {0, 0, 0, 0, 0, 0},
                      {0, 1, 0, 1, 0, 1}, {0, 1, 0, 1, 0, 1}};
  return g;
}

inline const Grid& nbic_negative() {
  static const Grid g{{0, 1, 0, 1, 0, 1}, {0, 1, 0, 1, 0, 1}, {0, 0, 0, 0, 0, 0},
                      {1, 0, 1, 0, 1, 0}, {1, 0, 1, 0, 1, 0}};
  return g;
}

/// Same six rules on each side.
inline const std::vector<RuleSpec>& nbic_rules() {
  static const std::vector<RuleSpec> r{{{1}, {3, 5}}, {{3}, {1, 5}}, {{5}, {1, 3}},
                                       {{2}, {4, 6}}, {{4}, {2, 6}}, {{6}, {2, 4}}};
  return r;
}

// 5 x 5 NBF example.
inline ExpressionMatrix nbf_matrix() {
  return matrix({{4, 5, 3, 6, 1}, {8, 10, 6, 12, 2}, {3, 3, 3, 3, 3}, {7, 1, 9, 0, 8}, {14, 2, 18, 0, 16}});
}

inline const Grid& nbf_trajectory() {
  static const Grid g{{1, -1, 1, -1, -1, 1, -1, 1, -1, -1},
                      {1, -1, 1, -1, -1, 1, -1, 1, -1, -1},
                      {0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                      {-1, 1, -1, 1, 1, -1, 1, -1, -1, 1},
                      {-1, 1, -1, 1, 1, -1, 1, -1, -1, 1}};
  return g;
}

inline const Grid& nbf_positive() {
  static const Grid g{{1, 0, 1, 0, 0, 1, 0, 1, 0, 0},
                      {1, 0, 1, 0, 0, 1, 0, 1, 0, 0},
                      {0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                      {0, 1, 0, 1, 1, 0, 1, 0, 0, 1},
                      {0, 1, 0, 1, 1, 0, 1, 0, 0, 1}};
  return g;
}

inline const Grid& nbf_negative() {
  static const Grid g{{0, 1, 0, 1, 1, 0, 1, 0, 1, 1},
                      {0, 1, 0, 1, 1, 0, 1, 0, 1, 1},
                      {0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                      {1, 0, 1, 0, 0, 1, 0, 1, 1, 0},
                      {1, 0, 1, 0, 0, 1, 0, 1, 1, 0}};
  return g;
}

struct StableConceptSpec {
  ConceptSpec concept_spec;
  double expected_stability;
};

inline const std::vector<StableConceptSpec>& nbf_positive_concepts() {
  static const std::vector<StableConceptSpec> c{{{{1, 2}, {1, 3, 6, 8}}, 0.75}, {{{4, 5}, {2, 4, 5, 7, 10}}, 0.75}};
  return c;
}

inline const std::vector<StableConceptSpec>& nbf_negative_concepts() {
  static const std::vector<StableConceptSpec> c{{{{4, 5}, {1, 3, 6, 8, 9}}, 0.75},
                                                {{{1, 2}, {2, 4, 5, 7, 9, 10}}, 0.75},
                                                {{{1, 2, 4, 5}, {9}}, 0.56}};
  return c;
}

// Formal context used for the measure examples (objects 1..9, attributes a..h).
inline BinaryContext measures_context() {
  const Grid g{{0, 1, 0, 0, 0, 0, 1, 0}, {1, 0, 1, 0, 0, 0, 1, 0}, {0, 0, 0, 1, 1, 1, 1, 1},
               {1, 0, 0, 1, 1, 1, 1, 1}, {1, 0, 0, 0, 1, 1, 1, 1}, {0, 1, 0, 0, 0, 1, 1, 0},
               {1, 0, 0, 0, 0, 1, 1, 0}, {1, 0, 0, 0, 1, 0, 1, 0}, {1, 1, 1, 1, 1, 1, 1, 1}};
  BinaryContext ctx(labels("", 9), {"a", "b", "c", "d", "e", "f", "g", "h"});
  for (std::size_t o = 0; o < g.size(); ++o)
    for (std::size_t a = 0; a < g[o].size(); ++a)
      if (g[o][a]) ctx.set(o, a);
  return ctx;
}

// ---- comparison helpers ----

inline bool same_grid(const TrajectoryMatrix& t, const Grid& expected) {
  if (t.genes() != expected.size()) return false;
  for (std::size_t g = 0; g < t.genes(); ++g) {
    if (expected[g].size() != t.columns()) return false;
    for (std::size_t k = 0; k < t.columns(); ++k)
      if (t.at(g, k) != expected[g][k]) return false;
  }
  return true;
}

inline bool same_grid(const BinaryContext& ctx, const Grid& expected) {
  if (ctx.objects() != expected.size()) return false;
  for (std::size_t o = 0; o < ctx.objects(); ++o) {
    if (expected[o].size() != ctx.attributes()) return false;
    for (std::size_t a = 0; a < ctx.attributes(); ++a)
      if (ctx.has(o, a) != (expected[o][a] != 0)) return false;
  }
  return true;
}

inline Bitset one_based(std::size_t universe, const std::vector<std::size_t>& xs) {
  Bitset b(universe);
  for (auto x : xs) b.set(x - 1);
  return b;
}

inline FormalConcept to_concept(const BinaryContext& ctx, const ConceptSpec& s) {
  return {one_based(ctx.objects(), s.genes), one_based(ctx.attributes(), s.columns)};
}

inline bool same_concepts(const BinaryContext& ctx, std::vector<FormalConcept> found,
                          const std::vector<ConceptSpec>& expected) {
  std::vector<FormalConcept> want;
  for (const auto& s : expected) want.push_back(to_concept(ctx, s));
  std::sort(want.begin(), want.end(), concept_less);
  std::sort(found.begin(), found.end(), concept_less);
  return want == found;
}

inline const GenericRule* find_rule(const std::vector<GenericRule>& rules, std::size_t attributes, const RuleSpec& s) {
  const Bitset p = one_based(attributes, s.premise);
  const Bitset c = one_based(attributes, s.conclusion);
  for (const auto& r : rules)
    if (r.premise == p && r.conclusion == c) return &r;
  return nullptr;
}

// ---- replay ----

struct GoldenStage {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct GoldenReport {
  std::string id;
  std::vector<GoldenStage> stages;
  std::vector<Bicluster> result;

  bool passed() const {
    return !stages.empty() && std::all_of(stages.begin(), stages.end(), [](const auto& s) { return s.passed; });
  }
};

inline const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids{"biarm", "bifca-plus", "bifca", "nbic-arm", "nbf"};
  return ids;
}

namespace detail {

inline std::string describe(const Bicluster& b) {
  std::ostringstream os;
  os << "genes{";
  for (std::size_t i = 0; i < b.genes.size(); ++i) os << (i ? "," : "") << "g" << b.genes[i] + 1;
  os << "} conditions{";
  for (std::size_t i = 0; i < b.conditions.size(); ++i) os << (i ? "," : "") << "c" << b.conditions[i] + 1;
  os << "}";
  if (b.pairs) {
    os << " columns{";
    for (std::size_t i = 0; i < b.pairs->columns.size(); ++i) os << (i ? "," : "") << "C" << b.pairs->columns[i] + 1;
    os << "}";
  }
  return os.str();
}

inline IndexSet range(std::size_t first, std::size_t last) {
  IndexSet out;
  for (std::size_t i = first; i <= last; ++i) out.push_back(i);
  return out;
}

inline void check_rules(GoldenReport& rep, const std::string& name, const std::vector<GenericRule>& rules,
                        std::size_t attributes, const std::vector<RuleSpec>& expected, std::size_t count,
                        bool exact) {
  bool ok = !exact || rules.size() == expected.size();
  std::string detail = std::to_string(rules.size()) + " rules";
  for (const auto& s : expected) {
    const auto* r = find_rule(rules, attributes, s);
    if (!r || r->support_count != count || r->premise_count != count) {
      ok = false;
      detail += "; missing or wrong rule";
    }
  }
  rep.stages.push_back({name, ok, detail});
}

inline GoldenReport replay_biarm() {
  GoldenReport rep{"biarm", {}, {}};
  const auto m = six_matrix();
  const auto traj = trajectory(m, PairMode::all_pairs);
  rep.stages.push_back({"all-pairs trajectory", same_grid(traj, six_all_pairs_trajectory()), "6 x 15"});
  const auto ctx = binarize_by_symbol_frequency(traj);
  rep.stages.push_back({"binary context", same_grid(ctx, six_all_pairs_binary()), "6 x 15"});
  const auto rules = extract_igb(ctx, 0.3, 0.8);
  check_rules(rep, "IGB rules (minsupp 0.3, minconf 0.8)", rules, ctx.attributes(), six_rules(), 2, false);
  const auto* r = find_rule(rules, ctx.attributes(), six_rules().front());
  const bool genes_ok = r && supporting_objects(ctx, *r) == one_based(6, {3, 6});
  rep.stages.push_back({"supporting genes of 3 => 4", genes_ok, "expected g3,g6"});
  PipelineConfig cfg;
  cfg.minsupp = 0.3;
  cfg.minconf = 0.8;
  cfg.minjaccard = 1.0;
  PipelineTrace trace;
  rep.result = run_biarm(m, cfg, &trace);
  bool has = false;
  for (const auto& b : trace.candidates)
    has = has || (b.genes == IndexSet{2, 5} && b.pairs->columns == IndexSet{2, 3});
  rep.stages.push_back({"pipeline candidate <g3 g6, C3 C4>", has, std::to_string(rep.result.size()) + " biclusters"});
  return rep;
}

inline GoldenReport replay_bifca_plus() {
  GoldenReport rep{"bifca-plus", {}, {}};
  const auto m = six_matrix();
  const auto traj = trajectory(m, PairMode::adjacent);
  rep.stages.push_back({"adjacent trajectory", same_grid(traj, six_adjacent_trajectory()), "6 x 5"});
  const auto ctx = binarize_by_symbol_frequency(traj);
  rep.stages.push_back({"binary context", same_grid(ctx, six_adjacent_binary()), "6 x 5"});
  const auto concepts = enumerate_concepts(ctx);
  rep.stages.push_back({"formal concepts", same_concepts(ctx, concepts, six_adjacent_concepts()),
                        std::to_string(concepts.size()) + " concepts"});
  const auto& c = six_adjacent_concepts();
  const double ov = set_overlap(one_based(5, c[2].columns), one_based(5, c[3].columns));
  rep.stages.push_back({"overlap of concepts 3 and 4 = 1/3", ov == 1.0 / 3.0, std::to_string(ov)});
  PipelineConfig cfg;
  cfg.minbond = 0.5;
  const auto kept = run_bifca_plus(m, cfg);
  rep.stages.push_back({"minbond 0.5 keeps all", kept.size() == 5, std::to_string(kept.size()) + " biclusters"});
  cfg.minbond = 0.3;
  rep.result = run_bifca_plus(m, cfg);
  std::size_t fc34 = 0;
  for (const auto& b : rep.result) {
    if ((b.genes == IndexSet{4} && b.pairs->columns == IndexSet{0, 1}) ||
        (b.genes == IndexSet{5} && b.pairs->columns == IndexSet{0, 2}))
      ++fc34;
  }
  rep.stages.push_back({"minbond 0.3 keeps one of concepts 3 and 4", fc34 == 1,
                        std::to_string(rep.result.size()) + " biclusters"});
  return rep;
}

inline GoldenReport replay_bifca() {
  GoldenReport rep{"bifca", {}, {}};
  const auto m = six_matrix();
  const auto traj = trajectory(m, PairMode::all_pairs);
  rep.stages.push_back({"all-pairs trajectory", same_grid(traj, six_all_pairs_trajectory()), "6 x 15"});
  const auto ctx = binarize_by_symbol_frequency(traj);
  rep.stages.push_back({"binary context", same_grid(ctx, six_all_pairs_binary()), "6 x 15"});
  const auto concepts = enumerate_concepts(ctx);
  rep.stages.push_back({"formal concepts", same_concepts(ctx, concepts, six_all_pairs_concepts()),
                        std::to_string(concepts.size()) + " concepts"});
  const auto& c = six_all_pairs_concepts();
  const auto fc5 = make_pair_bicluster(Algorithm::bifca, {6, 6}, {2, 4}, PairMode::all_pairs, {6, 7});
  const auto fc6 = make_pair_bicluster(Algorithm::bifca, {6, 6}, {2}, PairMode::all_pairs, {2, 3, 6, 7});
  const double ov = set_overlap(one_based(15, c[4].columns), one_based(15, c[5].columns));
  rep.stages.push_back({"overlap of concepts 5 and 6 = 0.5", ov == 0.5, std::to_string(ov)});
  const auto both = overlap_filter({fc5, fc6}, 0.6, biclust::detail::OverlapKind::columns, "bond");
  rep.stages.push_back({"threshold 0.6 keeps both", both.size() == 2, ""});
  const auto one = overlap_filter({fc5, fc6}, 0.3, biclust::detail::OverlapKind::columns, "bond");
  rep.stages.push_back({"threshold 0.3 keeps concept 6", one.size() == 1 && one[0].genes == fc6.genes &&
                                                        one[0].pairs->columns == fc6.pairs->columns,
                        ""});
  PipelineConfig cfg;
  cfg.minbond = 0.6;
  cfg.mincondition = 1;
  rep.result = run_bifca(m, cfg);
  rep.stages.push_back({"pipeline runs", !rep.result.empty(), std::to_string(rep.result.size()) + " biclusters"});
  return rep;
}

inline GoldenReport replay_nbic_arm() {
  GoldenReport rep{"nbic-arm", {}, {}};
  const auto m = nbic_matrix();
  const auto traj = trajectory(m, PairMode::adjacent);
  rep.stages.push_back({"adjacent trajectory", same_grid(traj, nbic_trajectory()), "5 x 6"});
  const auto sc = binarize_signs(traj);
  rep.stages.push_back({"positive context", same_grid(sc.positive, nbic_positive()), "5 x 6"});
  rep.stages.push_back({"negative context", same_grid(sc.negative, nbic_negative()), "5 x 6"});
  check_rules(rep, "positive IGB rules", extract_igb(sc.positive, 0.2, 0.9), 6, nbic_rules(), 2, true);
  check_rules(rep, "negative IGB rules", extract_igb(sc.negative, 0.2, 0.9), 6, nbic_rules(), 2, true);
  PipelineConfig cfg;
  cfg.minsupp = 0.2;
  cfg.minconf = 0.9;
  cfg.alpha1 = 0.9;
  cfg.alpha2 = 0.9;
  rep.result = run_nbic_arm(m, cfg);
  const bool ok = rep.result.size() == 1 && rep.result[0].genes == IndexSet{0, 1, 3, 4} &&
                  rep.result[0].pairs->columns == range(0, 5) && rep.result[0].conditions == range(0, 6);
  rep.stages.push_back({"final bicluster <g1 g2 g4 g5, C1..C6>", ok,
                        rep.result.empty() ? "none" : describe(rep.result[0])});
  return rep;
}

inline GoldenReport replay_nbf() {
  GoldenReport rep{"nbf", {}, {}};
  const auto m = nbf_matrix();
  const auto traj = trajectory(m, PairMode::all_pairs);
  rep.stages.push_back({"all-pairs trajectory", same_grid(traj, nbf_trajectory()), "5 x 10"});
  const auto sc = binarize_signs(traj);
  rep.stages.push_back({"positive context", same_grid(sc.positive, nbf_positive()), "5 x 10"});
  rep.stages.push_back({"negative context", same_grid(sc.negative, nbf_negative()), "5 x 10"});
  auto check_side = [&](const char* name, const BinaryContext& ctx, const std::vector<StableConceptSpec>& want) {
    std::vector<ConceptSpec> specs;
    for (const auto& w : want) specs.push_back(w.concept_spec);
    const auto found = enumerate_concepts(ctx);
    bool ok = same_concepts(ctx, found, specs);
    std::string detail = std::to_string(found.size()) + " concepts; stability";
    for (const auto& w : want) {
      const double s = stability(ctx, to_concept(ctx, w.concept_spec)).value;
      ok = ok && std::abs(s - w.expected_stability) <= 0.005;
      detail += " " + std::to_string(s);
    }
    rep.stages.push_back({name, ok, detail});
  };
  check_side("positive concepts and stability", sc.positive, nbf_positive_concepts());
  check_side("negative concepts and stability", sc.negative, nbf_negative_concepts());
  PipelineConfig cfg;
  cfg.minstability = 0.6;
  cfg.alpha1 = 0.7;
  cfg.alpha2 = 0.7;
  PipelineTrace trace;
  rep.result = run_nbf(m, cfg, &trace);
  bool dropped = true;
  for (const auto& b : trace.negative_candidates) dropped = dropped && b.genes.size() != 4;
  rep.stages.push_back({"minstability 0.6 drops the 4-gene down concept", dropped && trace.negative_candidates.size() == 2,
                        std::to_string(trace.negative_candidates.size()) + " negative candidates"});
  const bool ok = rep.result.size() == 1 && rep.result[0].genes == IndexSet{0, 1, 3, 4} &&
                  rep.result[0].conditions == range(0, 4) &&
                  rep.result[0].pairs->columns == IndexSet{0, 1, 2, 3, 4, 5, 6, 7, 9};
  rep.stages.push_back({"final bicluster <g1 g2 g4 g5, c1..c5>", ok,
                        rep.result.empty() ? "none" : describe(rep.result[0])});
  return rep;
}

}  // namespace detail

/// Replays one worked example. Throws ConfigError for an unknown id.
inline GoldenReport run_golden(const std::string& id) {
  if (id == "biarm") return detail::replay_biarm();
  if (id == "bifca-plus") return detail::replay_bifca_plus();
  if (id == "bifca") return detail::replay_bifca();
  if (id == "nbic-arm") return detail::replay_nbic_arm();
  if (id == "nbf") return detail::replay_nbf();
  throw ConfigError("unknown example '" + id + "'");
}

}  // namespace biclust::golden
