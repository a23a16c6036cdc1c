#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "biclust/bitset.hpp"
#include "biclust/concepts.hpp"
#include "biclust/context.hpp"
#include "biclust/error.hpp"
#include "biclust/io.hpp"

namespace biclust {

struct ClosedItemset {
  Bitset items;
  Bitset extent;
  std::size_t support_count = 0;
  std::vector<Bitset> generators;  // minimal generators, lexicographic order
};

/// Rule premise => conclusion where premise is a minimal generator and premise | conclusion is closed.
struct GenericRule {
  Bitset premise;
  Bitset conclusion;
  std::size_t support_count = 0;  // objects having premise | conclusion
  std::size_t premise_count = 0;  // objects having the premise
  double support = 0.0;           // support_count / |objects|
  double confidence = 0.0;        // support_count / premise_count

  Bitset items() const { return premise | conclusion; }
  bool operator==(const GenericRule&) const = default;
};

namespace detail {

constexpr double kRatioSlack = 1e-12;

inline bool at_least(double value, double threshold) { return value + kRatioSlack >= threshold; }

inline void check_ratio(double value, const char* name) {
  if (!(value > 0.0 && value <= 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1]");
}

/// Smallest object count whose frequency reaches `minsupp`.
inline std::size_t min_support_count(std::size_t objects, double minsupp) {
  const double raw = std::ceil(minsupp * static_cast<double>(objects) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(0.0, raw)));
}

struct Key {
  IndexSet items;
  Bitset bits;
  Bitset extent;
};

/// Frequent keys (minimal generators of some closed itemset), level by level. A set is a key when
/// its support is strictly below the support of each immediate subset; keys form an order ideal, so
/// candidates are Apriori joins of same-prefix keys whose immediate subsets are all keys.
/// `allowed` restricts the attributes considered; `stop` marks keys that must not be extended.
template <class StopFn>
std::vector<Key> mine_keys(const BinaryContext& ctx, std::size_t min_count, const Bitset& allowed, StopFn stop) {
  std::vector<Key> all;
  std::map<IndexSet, std::size_t> support_of;
  Key empty{{}, ctx.no_attributes(), ctx.all_objects()};
  if (empty.extent.count() < min_count) return all;
  support_of[{}] = empty.extent.count();
  all.push_back(empty);
  if (stop(empty)) return all;

  std::vector<Key> level;
  for (auto a = allowed.find_first(); a != Bitset::npos; a = allowed.find_next(a)) {
    Bitset ext = ctx.column(a);
    const std::size_t s = ext.count();
    if (s < min_count || s >= ctx.objects()) continue;
    Key k{{a}, ctx.no_attributes(), std::move(ext)};
    k.bits.set(a);
    support_of[k.items] = s;
    all.push_back(k);
    if (!stop(k)) level.push_back(std::move(k));
  }

  while (!level.empty()) {
    std::vector<Key> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        const auto& x = level[i].items;
        const auto& y = level[j].items;
        if (!std::equal(x.begin(), x.end() - 1, y.begin())) break;  // level is lexicographic
        IndexSet cand = x;
        cand.push_back(y.back());
        Bitset ext = level[i].extent & ctx.column(y.back());
        const std::size_t s = ext.count();
        if (s < min_count) continue;
        bool is_key = true;
        for (std::size_t drop = 0; drop < cand.size() && is_key; ++drop) {
          IndexSet sub;
          for (std::size_t t = 0; t < cand.size(); ++t)
            if (t != drop) sub.push_back(cand[t]);
          auto it = support_of.find(sub);
          is_key = it != support_of.end() && s < it->second;
        }
        if (!is_key) continue;
        Key k{cand, level[i].bits, std::move(ext)};
        k.bits.set(y.back());
        support_of[k.items] = s;
        all.push_back(k);
        if (!stop(k)) next.push_back(std::move(k));
      }
    }
    level = std::move(next);
  }
  return all;
}

inline bool rule_less(const GenericRule& a, const GenericRule& b) {
  if (a.support_count != b.support_count) return a.support_count > b.support_count;
  // confidence desc, compared exactly as fractions
  const auto lhs = a.support_count * b.premise_count;
  const auto rhs = b.support_count * a.premise_count;
  if (lhs != rhs) return lhs > rhs;
  if (a.premise != b.premise) return lex_less(a.premise, b.premise);
  return lex_less(a.conclusion, b.conclusion);
}

}  // namespace detail

/// Non-empty closed itemsets with frequency >= minsupp and their minimal generators, ordered by
/// itemset (lexicographic).
inline std::vector<ClosedItemset> mine_frequent_closed(const BinaryContext& ctx, double minsupp, unsigned jobs = 1) {
  detail::check_ratio(minsupp, "minsupp");
  std::vector<ClosedItemset> out;
  if (ctx.objects() == 0) return out;
  const std::size_t min_count = detail::min_support_count(ctx.objects(), minsupp);
  EnumerationOptions opt;
  opt.min_extent = min_count;
  opt.min_intent = 1;
  opt.jobs = jobs;
  for (auto& c : enumerate_concepts(ctx, opt)) out.push_back({c.intent, c.extent, c.extent.count(), {}});

  std::map<Bitset, std::size_t> index;
  for (std::size_t i = 0; i < out.size(); ++i) index.emplace(out[i].items, i);
  const auto keys = detail::mine_keys(ctx, min_count, ctx.all_attributes(), [](const detail::Key&) { return false; });
  for (const auto& k : keys) {
    auto it = index.find(intent_of(ctx, k.extent));
    if (it != index.end()) out[it->second].generators.push_back(k.bits);
  }
  for (auto& c : out) std::sort(c.generators.begin(), c.generators.end(), [](auto& a, auto& b) { return lex_less(a, b); });
  return out;
}

/// All inclusion-minimal attribute sets whose closure is `closed`.
inline std::vector<Bitset> minimal_generators(const BinaryContext& ctx, const Bitset& closed) {
  detail::check_universe(closed, ctx.attributes(), "attribute");
  if (close_itemset(ctx, closed) != closed) throw NotClosedError("itemset is not closed");
  const Bitset target = extent_of(ctx, closed);
  auto is_generator = [&](const detail::Key& k) { return k.extent == target; };
  std::vector<Bitset> out;
  for (const auto& k : detail::mine_keys(ctx, 0, closed, is_generator)) {
    if (is_generator(k)) out.push_back(k.bits);
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return lex_less(a, b); });
  return out;
}

/// Informative generic basis: for every non-empty frequent closed itemset I, the rules g => I - g
/// where g is a minimal generator contained in I (g != I), the confidence reaches minconf, and no
/// proper subset of g does so for the same I. The empty set counts as the generator of the closure
/// of the empty set, so `{} => I` appears when I alone is frequent enough.
inline std::vector<GenericRule> extract_igb(const BinaryContext& ctx, double minsupp, double minconf, unsigned jobs = 1) {
  detail::check_ratio(minsupp, "minsupp");
  detail::check_ratio(minconf, "minconf");
  std::vector<GenericRule> rules;
  if (ctx.objects() == 0) return rules;
  const std::size_t min_count = detail::min_support_count(ctx.objects(), minsupp);

  EnumerationOptions opt;
  opt.min_extent = min_count;
  opt.jobs = jobs;
  auto closed = enumerate_concepts(ctx, opt);
  std::stable_sort(closed.begin(), closed.end(),
                   [](const FormalConcept& a, const FormalConcept& b) { return a.extent.count() > b.extent.count(); });

  const auto keys = detail::mine_keys(ctx, min_count, ctx.all_attributes(), [](const detail::Key&) { return false; });
  std::map<IndexSet, std::size_t> key_support;
  for (const auto& k : keys) key_support.emplace(k.items, k.extent.count());

  const double n = static_cast<double>(ctx.objects());
  for (const auto& k : keys) {
    const std::size_t gs = k.extent.count();
    for (const auto& c : closed) {
      const std::size_t is = c.extent.count();
      const double conf = static_cast<double>(is) / static_cast<double>(gs);
      if (!detail::at_least(conf, minconf)) break;  // closed sorted by support desc
      if (!k.bits.is_subset_of(c.intent) || k.bits == c.intent) continue;
      bool minimal = true;
      for (std::size_t drop = 0; drop < k.items.size() && minimal; ++drop) {
        IndexSet sub;
        for (std::size_t t = 0; t < k.items.size(); ++t)
          if (t != drop) sub.push_back(k.items[t]);
        const double sub_conf = static_cast<double>(is) / static_cast<double>(key_support.at(sub));
        minimal = !detail::at_least(sub_conf, minconf);
      }
      if (!minimal) continue;
      GenericRule r;
      r.premise = k.bits;
      r.conclusion = c.intent - k.bits;
      r.support_count = is;
      r.premise_count = gs;
      r.support = static_cast<double>(is) / n;
      r.confidence = conf;
      rules.push_back(std::move(r));
    }
  }
  std::sort(rules.begin(), rules.end(), detail::rule_less);
  return rules;
}

/// Objects having every item of the rule.
inline Bitset supporting_objects(const BinaryContext& ctx, const GenericRule& rule) {
  return extent_of(ctx, rule.items());
}

/// TSV dump: premise, conclusion (comma-joined attribute ids), support, confidence.
inline void write_rules_tsv(std::ostream& os, const BinaryContext& ctx, const std::vector<GenericRule>& rules) {
  auto names = [&](const Bitset& s) {
    std::string out;
    for (auto a = s.find_first(); a != Bitset::npos; a = s.find_next(a)) {
      if (!out.empty()) out += ',';
      out += ctx.attribute_ids()[a];
    }
    return out;
  };
  os << "premise\tconclusion\tsupport\tconfidence\n";
  for (const auto& r : rules) {
    os << names(r.premise) << '\t' << names(r.conclusion) << '\t' << detail::format_double(r.support) << '\t'
       << detail::format_double(r.confidence) << '\n';
  }
}

}  // namespace biclust
