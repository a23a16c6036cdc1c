#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
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
#include "biclust/rules.hpp"

namespace biclust {

struct PipelineConfig {
  std::optional<double> minsupp;
  std::optional<double> minconf;
  std::optional<double> minjaccard;
  std::optional<double> minbond;
  std::optional<std::size_t> mincondition;
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  std::optional<double> minstability;
  std::optional<std::size_t> min_extent;
  std::optional<std::size_t> min_intent;

  std::optional<PairMode> mode;  // overrides the algorithm's default pairing
  double epsilon = 0.0;          // trajectory tolerance
  unsigned jobs = 1;
  std::size_t max_concepts = 0;  // 0 = unlimited
  bool fixpoint = false;         // repeat the merging step until nothing changes
  StabilityOptions stability;
};

/// Intermediate artifacts of one run, filled when a trace is passed in.
struct PipelineTrace {
  std::optional<TrajectoryMatrix> trajectory;
  std::optional<BinaryContext> context;
  std::optional<BinaryContext> positive;
  std::optional<BinaryContext> negative;
  std::vector<FormalConcept> concepts;
  std::vector<FormalConcept> positive_concepts;
  std::vector<FormalConcept> negative_concepts;
  std::vector<StabilityResult> positive_stability;
  std::vector<StabilityResult> negative_stability;
  std::vector<GenericRule> rules;
  std::vector<GenericRule> positive_rules;
  std::vector<GenericRule> negative_rules;
  std::vector<Bicluster> candidates;
  std::vector<Bicluster> positive_candidates;
  std::vector<Bicluster> negative_candidates;
  std::vector<Bicluster> phase4;
};

inline PairMode default_mode(Algorithm a) {
  switch (a) {
    case Algorithm::bifca_plus:
    case Algorithm::nbic_arm: return PairMode::adjacent;
    default: return PairMode::all_pairs;
  }
}

namespace detail {

template <class T>
T required(const std::optional<T>& value, const char* name, Algorithm alg) {
  if (!value) throw ConfigError(std::string(to_string(alg)) + " requires " + name);
  return *value;
}

inline double required_ratio(const std::optional<double>& value, const char* name, Algorithm alg) {
  const double v = required(value, name, alg);
  if (!(v > 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1]");
  return v;
}

inline void check_counts(const PipelineConfig& cfg) {
  auto positive = [](const std::optional<std::size_t>& v, const char* name) {
    if (v && *v < 1) throw ConfigError(std::string(name) + " must be >= 1");
  };
  positive(cfg.mincondition, "mincondition");
  positive(cfg.min_extent, "min_extent");
  positive(cfg.min_intent, "min_intent");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
}

inline EnumerationOptions enumeration_options(const PipelineConfig& cfg) {
  EnumerationOptions opt;
  opt.min_extent = cfg.min_extent.value_or(1);
  opt.min_intent = cfg.min_intent.value_or(1);
  opt.max_concepts = cfg.max_concepts;
  opt.jobs = cfg.jobs;
  return opt;
}

/// Word-packed gene and column sets for allocation-free overlap arithmetic.
struct Packed {
  std::vector<std::uint64_t> genes;
  std::vector<std::uint64_t> columns;
  std::size_t gene_count = 0;
  std::size_t column_count = 0;

  static std::vector<std::uint64_t> pack(const IndexSet& s, std::size_t universe) {
    std::vector<std::uint64_t> w((universe + 63) / 64, 0);
    for (auto i : s) w[i / 64] |= std::uint64_t{1} << (i % 64);
    return w;
  }

  static std::size_t common(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(__builtin_popcountll(a[i] & b[i]));
    return n;
  }
};

inline std::size_t column_universe(const Bicluster& b) {
  return b.pairs ? pair_columns(b.shape.conditions, b.pairs->mode).size() : b.shape.conditions;
}

inline Packed pack(const Bicluster& b) {
  const auto& cols = b.mined_columns();
  return {Packed::pack(b.genes, b.shape.genes), Packed::pack(cols, column_universe(b)), b.genes.size(), cols.size()};
}

enum class OverlapKind { columns, cells };

inline double packed_overlap(const Packed& a, const Packed& b, OverlapKind kind) {
  const std::size_t cc = Packed::common(a.columns, b.columns);
  if (kind == OverlapKind::columns) {
    const std::size_t uni = a.column_count + b.column_count - cc;
    return uni == 0 ? 0.0 : static_cast<double>(cc) / static_cast<double>(uni);
  }
  const std::size_t inter = Packed::common(a.genes, b.genes) * cc;
  const std::size_t uni = a.gene_count * a.column_count + b.gene_count * b.column_count - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Filter order: more mined columns first, then more genes, then gene and column index sequences.
inline bool candidate_before(const Bicluster& a, const Bicluster& b) {
  const auto& ca = a.mined_columns();
  const auto& cb = b.mined_columns();
  if (ca.size() != cb.size()) return ca.size() > cb.size();
  if (a.genes.size() != b.genes.size()) return a.genes.size() > b.genes.size();
  if (a.genes != b.genes) return lex_less(a.genes, b.genes);
  return lex_less(ca, cb);
}

inline void dedupe(std::vector<Bicluster>& bs) {
  std::set<std::pair<IndexSet, IndexSet>> seen;
  std::vector<Bicluster> out;
  for (auto& b : bs) {
    if (seen.emplace(b.genes, b.mined_columns()).second) out.push_back(std::move(b));
  }
  bs = std::move(out);
}

}  // namespace detail

/// Greedy overlap filter. Candidates are visited in filter order and admitted when their overlap
/// with every admitted bicluster is at most `threshold`. The largest overlap met at admission is
/// stored under `score_name`.
inline std::vector<Bicluster> overlap_filter(std::vector<Bicluster> candidates, double threshold,
                                             detail::OverlapKind kind, const std::string& score_name) {
  std::stable_sort(candidates.begin(), candidates.end(), detail::candidate_before);
  std::vector<Bicluster> admitted;
  std::vector<detail::Packed> packed;
  for (auto& c : candidates) {
    auto pc = detail::pack(c);
    double worst = 0.0;
    bool ok = true;
    for (const auto& pa : packed) {
      const double ov = detail::packed_overlap(pc, pa, kind);
      worst = std::max(worst, ov);
      if (ov > threshold) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    c.scores[score_name] = worst;
    packed.push_back(std::move(pc));
    admitted.push_back(std::move(c));
  }
  return admitted;
}

/// |xs & ys| / min(|xs|, |ys|); 0 when either set is empty.
inline double intersection_proportion(const IndexSet& xs, const IndexSet& ys) {
  const std::size_t denom = std::min(xs.size(), ys.size());
  return denom == 0 ? 0.0 : static_cast<double>(intersection_size(xs, ys)) / static_cast<double>(denom);
}

/// True when, over the bicluster's pair columns, every gene's signs are all non-zero and either equal
/// or opposite to those of its first gene.
inline bool sign_consistent(const TrajectoryMatrix& traj, const IndexSet& genes, const IndexSet& columns) {
  if (genes.empty()) return true;
  const std::size_t ref = genes.front();
  for (auto k : columns) {
    if (traj.at(ref, k) == 0) return false;
  }
  for (auto g : genes) {
    int relation = 0;  // +1 same as ref, -1 opposite
    for (auto k : columns) {
      const int s = traj.at(g, k) * traj.at(ref, k);
      if (s == 0) return false;
      if (relation == 0) relation = s;
      if (s != relation) return false;
    }
  }
  return true;
}

namespace detail {

inline Bicluster pair_bicluster(Algorithm alg, const ExpressionMatrix& m, PairMode mode, const Bitset& genes,
                                const Bitset& columns) {
  return make_pair_bicluster(alg, {m.genes(), m.conditions()}, to_indices(genes), mode, to_indices(columns));
}

inline void finish(std::vector<Bicluster>& out, const ExpressionMatrix& m) {
  for (const auto& b : out) validate(b);
  sort_for_output(out, m.gene_ids(), m.condition_ids());
}

inline std::vector<Bicluster> concept_biclusters(Algorithm alg, const ExpressionMatrix& m, PairMode mode,
                                                 const std::vector<FormalConcept>& concepts) {
  std::vector<Bicluster> out;
  for (const auto& c : concepts) out.push_back(pair_bicluster(alg, m, mode, c.extent, c.intent));
  return out;
}

inline double min_score(const Bicluster& a, const Bicluster& b, const std::string& key) {
  auto ia = a.scores.find(key);
  auto ib = b.scores.find(key);
  if (ia == a.scores.end()) return ib == b.scores.end() ? 0.0 : ib->second;
  if (ib == b.scores.end()) return ia->second;
  return std::min(ia->second, ib->second);
}

/// Pairing step: <genes+ | genes-, columns+ & columns-> for every pair meeting alpha1.
inline std::vector<Bicluster> assemble_opposites(Algorithm alg, const std::vector<Bicluster>& pos,
                                                 const std::vector<Bicluster>& neg, double alpha1) {
  std::vector<Bicluster> out;
  for (const auto& p : pos) {
    for (const auto& n : neg) {
      if (!at_least(intersection_proportion(p.mined_columns(), n.mined_columns()), alpha1)) continue;
      auto cols = set_intersection(p.mined_columns(), n.mined_columns());
      if (cols.empty()) continue;
      auto b = make_pair_bicluster(alg, p.shape, set_union(p.genes, n.genes), p.pairs->mode, std::move(cols));
      for (const auto& key : {std::string("stability"), std::string("support")}) {
        if (p.scores.count(key) || n.scores.count(key)) b.scores[key] = min_score(p, n, key);
      }
      out.push_back(std::move(b));
    }
  }
  std::stable_sort(out.begin(), out.end(), candidate_before);
  dedupe(out);
  return out;
}

inline std::optional<Bicluster> try_merge(const Bicluster& r, const Bicluster& b, double alpha2,
                                          const TrajectoryMatrix& traj) {
  if (!at_least(intersection_proportion(r.genes, b.genes), alpha2)) return std::nullopt;
  auto genes = set_intersection(r.genes, b.genes);
  auto cols = set_union(r.mined_columns(), b.mined_columns());
  if (genes.empty() || !sign_consistent(traj, genes, cols)) return std::nullopt;
  auto merged = make_pair_bicluster(r.algorithm, r.shape, std::move(genes), r.pairs->mode, std::move(cols));
  for (const auto& key : {std::string("stability"), std::string("support")}) {
    if (r.scores.count(key) || b.scores.count(key)) merged.scores[key] = min_score(r, b, key);
  }
  return merged;
}

/// Merging step: each bicluster is merged into the first accumulated result whose gene proportion meets
/// alpha2 (genes intersected, columns united); unmerged ones pass through. A merge must keep the
/// opposite-sign structure of the genes on the united columns.
inline std::vector<Bicluster> merge_similar(const std::vector<Bicluster>& in, double alpha2,
                                            const TrajectoryMatrix& traj, bool fixpoint) {
  std::vector<Bicluster> acc;
  for (const auto& b : in) {
    bool merged = false;
    for (auto& r : acc) {
      if (auto m = try_merge(r, b, alpha2, traj)) {
        r = std::move(*m);
        merged = true;
        break;
      }
    }
    if (!merged) acc.push_back(b);
  }
  if (fixpoint) {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < acc.size() && !changed; ++i) {
        for (std::size_t j = i + 1; j < acc.size() && !changed; ++j) {
          if (auto m = try_merge(acc[i], acc[j], alpha2, traj)) {
            acc[i] = std::move(*m);
            acc.erase(acc.begin() + static_cast<std::ptrdiff_t>(j));
            changed = true;
          }
        }
      }
    }
  }
  dedupe(acc);
  return acc;
}

}  // namespace detail

/// All-pairs trajectory, frequency binarization, IGB rules, then one bicluster per distinct rule
/// footprint (supporting genes x rule items), filtered by cell overlap <= minjaccard.
inline std::vector<Bicluster> run_biarm(const ExpressionMatrix& m, const PipelineConfig& cfg,
                                        PipelineTrace* trace = nullptr) {
  constexpr auto alg = Algorithm::biarm;
  const double minsupp = detail::required_ratio(cfg.minsupp, "minsupp", alg);
  const double minconf = detail::required_ratio(cfg.minconf, "minconf", alg);
  const double minjaccard = detail::required_ratio(cfg.minjaccard, "minjaccard", alg);
  detail::check_counts(cfg);
  const PairMode mode = cfg.mode.value_or(default_mode(alg));

  auto traj = trajectory(m, mode, cfg.epsilon);
  auto ctx = binarize_by_symbol_frequency(traj);
  auto rules = extract_igb(ctx, minsupp, minconf, cfg.jobs);

  std::vector<Bicluster> candidates;
  for (const auto& r : rules) {
    auto b = detail::pair_bicluster(alg, m, mode, supporting_objects(ctx, r), r.items());
    b.scores["support"] = r.support;
    b.scores["confidence"] = r.confidence;
    candidates.push_back(std::move(b));
  }
  detail::dedupe(candidates);
  auto out = overlap_filter(candidates, minjaccard, detail::OverlapKind::cells, "overlap");
  detail::finish(out, m);

  if (trace) {
    trace->trajectory = std::move(traj);
    trace->context = std::move(ctx);
    trace->rules = std::move(rules);
    trace->candidates = std::move(candidates);
  }
  return out;
}

namespace detail {

inline std::vector<Bicluster> run_concept_pipeline(Algorithm alg, const ExpressionMatrix& m,
                                                   const PipelineConfig& cfg, std::size_t mincondition,
                                                   PipelineTrace* trace) {
  const double minbond = required_ratio(cfg.minbond, "minbond", alg);
  check_counts(cfg);
  const PairMode mode = cfg.mode.value_or(default_mode(alg));

  auto traj = trajectory(m, mode, cfg.epsilon);
  auto ctx = binarize_by_symbol_frequency(traj);
  auto concepts = enumerate_concepts(ctx, enumeration_options(cfg));
  std::vector<FormalConcept> kept;
  for (const auto& c : concepts) {
    if (c.intent.count() >= mincondition) kept.push_back(c);
  }
  auto candidates = concept_biclusters(alg, m, mode, kept);
  auto out = overlap_filter(candidates, minbond, OverlapKind::columns, "bond");
  finish(out, m);

  if (trace) {
    trace->trajectory = std::move(traj);
    trace->context = std::move(ctx);
    trace->concepts = std::move(concepts);
    trace->candidates = std::move(candidates);
  }
  return out;
}

}  // namespace detail

/// Adjacent trajectory, frequency binarization, concepts, then the greedy intent-overlap filter.
inline std::vector<Bicluster> run_bifca_plus(const ExpressionMatrix& m, const PipelineConfig& cfg,
                                             PipelineTrace* trace = nullptr) {
  return detail::run_concept_pipeline(Algorithm::bifca_plus, m, cfg, 1, trace);
}

/// As BiFCA+ over all condition pairs, dropping concepts with fewer than mincondition columns first.
inline std::vector<Bicluster> run_bifca(const ExpressionMatrix& m, const PipelineConfig& cfg,
                                        PipelineTrace* trace = nullptr) {
  const auto mincondition = detail::required(cfg.mincondition, "mincondition", Algorithm::bifca);
  return detail::run_concept_pipeline(Algorithm::bifca, m, cfg, mincondition, trace);
}

/// Sign-split contexts mined with IGB on each side; rule footprints become up/down candidates that
/// are paired (alpha1) and merged (alpha2).
inline std::vector<Bicluster> run_nbic_arm(const ExpressionMatrix& m, const PipelineConfig& cfg,
                                           PipelineTrace* trace = nullptr) {
  constexpr auto alg = Algorithm::nbic_arm;
  const double minsupp = detail::required_ratio(cfg.minsupp, "minsupp", alg);
  const double minconf = detail::required_ratio(cfg.minconf, "minconf", alg);
  const double alpha1 = detail::required_ratio(cfg.alpha1, "alpha1", alg);
  const double alpha2 = detail::required_ratio(cfg.alpha2, "alpha2", alg);
  detail::check_counts(cfg);
  const PairMode mode = cfg.mode.value_or(default_mode(alg));

  auto traj = trajectory(m, mode, cfg.epsilon);
  auto sc = binarize_signs(traj);
  auto candidates_of = [&](const BinaryContext& ctx, const std::vector<GenericRule>& rules) {
    std::vector<Bicluster> out;
    for (const auto& r : rules) {
      auto b = detail::pair_bicluster(alg, m, mode, supporting_objects(ctx, r), r.items());
      b.scores["support"] = r.support;
      out.push_back(std::move(b));
    }
    detail::dedupe(out);
    std::stable_sort(out.begin(), out.end(), detail::candidate_before);
    return out;
  };
  auto pos_rules = extract_igb(sc.positive, minsupp, minconf, cfg.jobs);
  auto neg_rules = extract_igb(sc.negative, minsupp, minconf, cfg.jobs);
  auto pos = candidates_of(sc.positive, pos_rules);
  auto neg = candidates_of(sc.negative, neg_rules);
  auto phase4 = detail::assemble_opposites(alg, pos, neg, alpha1);
  auto out = detail::merge_similar(phase4, alpha2, traj, cfg.fixpoint);
  detail::finish(out, m);

  if (trace) {
    trace->trajectory = std::move(traj);
    trace->positive = std::move(sc.positive);
    trace->negative = std::move(sc.negative);
    trace->positive_rules = std::move(pos_rules);
    trace->negative_rules = std::move(neg_rules);
    trace->positive_candidates = std::move(pos);
    trace->negative_candidates = std::move(neg);
    trace->phase4 = std::move(phase4);
  }
  return out;
}

/// Sign-split contexts mined for concepts on each side; concepts with stability above minstability
/// are paired (alpha1) and merged (alpha2), then mapped back to the original conditions.
inline std::vector<Bicluster> run_nbf(const ExpressionMatrix& m, const PipelineConfig& cfg,
                                      PipelineTrace* trace = nullptr) {
  constexpr auto alg = Algorithm::nbf;
  const double minstability = detail::required(cfg.minstability, "minstability", alg);
  if (!(minstability >= 0.0 && minstability <= 1.0)) throw ConfigError("minstability must lie in [0, 1]");
  const double alpha1 = detail::required_ratio(cfg.alpha1, "alpha1", alg);
  const double alpha2 = detail::required_ratio(cfg.alpha2, "alpha2", alg);
  detail::check_counts(cfg);
  const PairMode mode = cfg.mode.value_or(default_mode(alg));

  auto traj = trajectory(m, mode, cfg.epsilon);
  auto sc = binarize_signs(traj);
  const auto opt = detail::enumeration_options(cfg);
  auto side = [&](const BinaryContext& ctx, std::vector<FormalConcept>& concepts, std::vector<StabilityResult>& stab) {
    concepts = enumerate_concepts(ctx, opt);
    std::vector<Bicluster> out;
    for (const auto& c : concepts) {
      stab.push_back(stability(ctx, c, cfg.stability));
      if (stab.back().value <= minstability) continue;
      auto b = detail::pair_bicluster(alg, m, mode, c.extent, c.intent);
      b.scores["stability"] = stab.back().value;
      out.push_back(std::move(b));
    }
    std::stable_sort(out.begin(), out.end(), detail::candidate_before);
    return out;
  };
  std::vector<FormalConcept> pos_concepts;
  std::vector<FormalConcept> neg_concepts;
  std::vector<StabilityResult> pos_stab;
  std::vector<StabilityResult> neg_stab;
  auto pos = side(sc.positive, pos_concepts, pos_stab);
  auto neg = side(sc.negative, neg_concepts, neg_stab);
  auto phase4 = detail::assemble_opposites(alg, pos, neg, alpha1);
  auto out = detail::merge_similar(phase4, alpha2, traj, cfg.fixpoint);
  detail::finish(out, m);

  if (trace) {
    trace->trajectory = std::move(traj);
    trace->positive = std::move(sc.positive);
    trace->negative = std::move(sc.negative);
    trace->positive_concepts = std::move(pos_concepts);
    trace->negative_concepts = std::move(neg_concepts);
    trace->positive_stability = std::move(pos_stab);
    trace->negative_stability = std::move(neg_stab);
    trace->positive_candidates = std::move(pos);
    trace->negative_candidates = std::move(neg);
    trace->phase4 = std::move(phase4);
  }
  return out;
}

inline std::vector<Bicluster> run_pipeline(Algorithm alg, const ExpressionMatrix& m, const PipelineConfig& cfg,
                                           PipelineTrace* trace = nullptr) {
  switch (alg) {
    case Algorithm::biarm: return run_biarm(m, cfg, trace);
    case Algorithm::bifca_plus: return run_bifca_plus(m, cfg, trace);
    case Algorithm::bifca: return run_bifca(m, cfg, trace);
    case Algorithm::nbic_arm: return run_nbic_arm(m, cfg, trace);
    case Algorithm::nbf: return run_nbf(m, cfg, trace);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace biclust
