#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "biclust/bicluster.hpp"
#include "biclust/bitset.hpp"
#include "biclust/concepts.hpp"
#include "biclust/context.hpp"
#include "biclust/error.hpp"

namespace biclust {

struct SupportProfile {
  std::size_t conjunctive = 0;  // objects having every attribute
  std::size_t disjunctive = 0;  // objects having at least one attribute
  double frequency = 0.0;       // conjunctive / |objects|
};

inline SupportProfile supports(const BinaryContext& ctx, const Bitset& attributes) {
  detail::check_universe(attributes, ctx.attributes(), "attribute");
  if (attributes.none()) throw EmptyPatternError();
  Bitset any = ctx.no_objects();
  for (auto a = attributes.find_first(); a != Bitset::npos; a = attributes.find_next(a)) any |= ctx.column(a);
  SupportProfile p;
  p.conjunctive = extent_of(ctx, attributes).count();
  p.disjunctive = any.count();
  p.frequency = ctx.objects() == 0 ? 0.0 : static_cast<double>(p.conjunctive) / static_cast<double>(ctx.objects());
  return p;
}

/// Conjunctive over disjunctive support; 0 when no object has any of the attributes.
inline double bond(const BinaryContext& ctx, const Bitset& attributes) {
  const auto p = supports(ctx, attributes);
  return p.disjunctive == 0 ? 0.0 : static_cast<double>(p.conjunctive) / static_cast<double>(p.disjunctive);
}

/// |xs & ys| / |xs | ys| (Jaccard); 0 when both sets are empty.
inline double set_overlap(const Bitset& xs, const Bitset& ys) {
  const std::size_t uni = (xs | ys).count();
  return uni == 0 ? 0.0 : static_cast<double>((xs & ys).count()) / static_cast<double>(uni);
}

inline double set_overlap(const IndexSet& xs, const IndexSet& ys) {
  const std::size_t inter = intersection_size(xs, ys);
  const std::size_t uni = xs.size() + ys.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Jaccard overlap of the gene x column cell sets of two biclusters. Pair-space biclusters are
/// compared over their pair columns, all others over their conditions.
inline double cell_overlap(const Bicluster& a, const Bicluster& b) {
  if (a.shape != b.shape) throw MatrixMismatchError("biclusters index different matrices");
  const bool pair_space = a.pairs && b.pairs;
  if (pair_space && a.pairs->mode != b.pairs->mode)
    throw MatrixMismatchError("biclusters use different pair-column modes");
  const IndexSet& ca = pair_space ? a.pairs->columns : a.conditions;
  const IndexSet& cb = pair_space ? b.pairs->columns : b.conditions;
  const std::size_t inter = intersection_size(a.genes, b.genes) * intersection_size(ca, cb);
  const std::size_t uni = a.genes.size() * ca.size() + b.genes.size() * cb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

enum class StabilityMethod { enumeration, inclusion_exclusion, monte_carlo };

inline std::string_view to_string(StabilityMethod m) {
  switch (m) {
    case StabilityMethod::enumeration: return "enumeration";
    case StabilityMethod::inclusion_exclusion: return "inclusion_exclusion";
    case StabilityMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

struct StabilityOptions {
  std::size_t exact_limit = 20;    // extents up to this size are counted by subset enumeration
  std::size_t blocker_limit = 24;  // max maximal blockers for exact inclusion-exclusion
  std::size_t samples = 100000;    // Monte-Carlo draws beyond the blocker limit
  std::uint64_t seed = 0x5eedULL;
};

struct StabilityResult {
  double value = 0.0;
  StabilityMethod method = StabilityMethod::enumeration;
  std::size_t extent_size = 0;
  /// Exact number of extent subsets whose intent equals the concept intent (absent for estimates).
  std::optional<boost::multiprecision::cpp_int> subset_count;

  bool estimated() const noexcept { return method == StabilityMethod::monte_carlo; }
};

namespace detail {

inline double ratio_pow2(const boost::multiprecision::cpp_int& count, std::size_t exponent) {
  if (count == 0) return 0.0;
  const std::size_t bits = boost::multiprecision::msb(count) + 1;
  const std::size_t shift = bits > 62 ? bits - 62 : 0;
  const auto top = static_cast<std::uint64_t>(count >> shift);
  return std::ldexp(static_cast<double>(top), static_cast<int>(shift) - static_cast<int>(exponent));
}

struct Word64 {
  std::uint64_t bits = 0;

  Word64 operator&(const Word64& o) const { return {bits & o.bits}; }
  bool none() const { return bits == 0; }
  bool intersects(const Word64& o) const { return (bits & o.bits) != 0; }
};

// Counts subsets of rows[i..] whose common bits with `alive` vanish. suffix[i] is the AND of
// rows[i..]; a bit set there can never be cleared, so the branch contributes nothing.
template <class Mask>
void count_closing_subsets(const std::vector<Mask>& rows, const std::vector<Mask>& suffix, std::size_t i,
                           const Mask& alive, std::uint64_t& count) {
  if (alive.none()) {
    count += std::uint64_t{1} << (rows.size() - i);
    return;
  }
  if (i == rows.size() || alive.intersects(suffix[i])) return;
  count_closing_subsets(rows, suffix, i + 1, alive & rows[i], count);
  count_closing_subsets(rows, suffix, i + 1, alive, count);
}

template <class Mask>
std::uint64_t closing_subsets(std::vector<Mask> rows, const Mask& alive) {
  std::vector<Mask> suffix(rows.size());
  for (std::size_t i = rows.size(); i-- > 0;) suffix[i] = i + 1 == rows.size() ? rows[i] : rows[i] & suffix[i + 1];
  std::uint64_t count = 0;
  count_closing_subsets(rows, suffix, 0, alive, count);
  return count;
}

// Subsets of the extent whose common attributes are exactly the intent. Only attributes outside
// the intent that some member has can survive, plus one sentinel bit that any member clears (the
// empty subset keeps every attribute).
inline std::uint64_t count_stable_subsets(const BinaryContext& ctx, const std::vector<std::size_t>& objects,
                                          const Bitset& outside) {
  if (outside.none()) return std::uint64_t{1} << objects.size();
  Bitset relevant(ctx.attributes());
  for (auto o : objects) relevant |= ctx.row(o);
  relevant &= outside;
  const auto attrs = to_indices(relevant);
  if (attrs.size() < 64) {
    std::vector<Word64> rows;
    for (auto o : objects) {
      Word64 w;
      for (std::size_t b = 0; b < attrs.size(); ++b)
        if (ctx.has(o, attrs[b])) w.bits |= std::uint64_t{1} << b;
      rows.push_back(w);  // sentinel bit (attrs.size()) left clear
    }
    const std::uint64_t all = attrs.size() == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (attrs.size() + 1)) - 1;
    return closing_subsets(std::move(rows), Word64{all});
  }
  std::vector<Bitset> rows;
  for (auto o : objects) {
    Bitset r(ctx.attributes() + 1);
    for (auto a : attrs)
      if (ctx.has(o, a)) r.set(a);
    rows.push_back(std::move(r));
  }
  Bitset alive(ctx.attributes() + 1);
  for (auto a : attrs) alive.set(a);
  alive.set(ctx.attributes());
  return closing_subsets(std::move(rows), alive);
}

}  // namespace detail

/// Intensional stability: share of extent subsets whose common attributes are exactly the intent.
///
/// Small extents are counted by pruned subset enumeration. Larger ones use inclusion-exclusion over
/// the maximal "blocker" sets (extent members having some attribute outside the intent): a subset
/// fails exactly when it fits inside one of them. Past the blocker limit, a seeded Monte-Carlo
/// estimate is returned and flagged through StabilityResult::method.
inline StabilityResult stability(const BinaryContext& ctx, const FormalConcept& fc,
                                 const StabilityOptions& opt = {}) {
  detail::check_universe(fc.extent, ctx.objects(), "object");
  detail::check_universe(fc.intent, ctx.attributes(), "attribute");
  if (intent_of(ctx, fc.extent) != fc.intent) throw Error("stability: extent does not close to intent");

  const auto objects = to_indices(fc.extent);
  const std::size_t k = objects.size();
  const Bitset outside = ~fc.intent;
  StabilityResult result;
  result.extent_size = k;

  if (k <= std::min<std::size_t>(opt.exact_limit, 62)) {
    const std::uint64_t count = detail::count_stable_subsets(ctx, objects, outside);
    result.method = StabilityMethod::enumeration;
    result.subset_count = boost::multiprecision::cpp_int(count);
    result.value = detail::ratio_pow2(*result.subset_count, k);
    return result;
  }

  // Blocker of attribute a (outside the intent): extent positions having a. Keep the maximal ones.
  std::vector<Bitset> blockers;
  for (auto a = outside.find_first(); a != Bitset::npos; a = outside.find_next(a)) {
    Bitset s(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (ctx.has(objects[i], a)) s.set(i);
    }
    blockers.push_back(std::move(s));
  }
  std::sort(blockers.begin(), blockers.end(), [](const Bitset& x, const Bitset& y) { return x.count() > y.count(); });
  std::vector<Bitset> maximal;
  for (auto& s : blockers) {
    bool dominated = false;
    for (const auto& t : maximal) {
      if (s.is_subset_of(t)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(std::move(s));
  }

  if (maximal.size() <= opt.blocker_limit) {
    std::map<Bitset, std::int64_t> terms;
    terms.emplace(full_bitset(k), 1);
    for (const auto& s : maximal) {
      std::vector<std::pair<Bitset, std::int64_t>> updates;
      updates.reserve(terms.size());
      for (const auto& [x, c] : terms) updates.emplace_back(x & s, -c);
      for (auto& [y, c] : updates) {
        auto& slot = terms[y];
        slot += c;
        if (slot == 0) terms.erase(y);
      }
    }
    boost::multiprecision::cpp_int count = 0;
    for (const auto& [x, c] : terms) count += boost::multiprecision::cpp_int(c) << x.count();
    result.method = StabilityMethod::inclusion_exclusion;
    result.subset_count = count;
    result.value = detail::ratio_pow2(count, k);
    return result;
  }

  std::mt19937_64 rng(opt.seed);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < opt.samples; ++s) {
    Bitset common = outside;
    for (std::size_t i = 0; i < k && common.any(); i += 64) {
      std::uint64_t draw = rng();
      for (std::size_t b = 0; b < 64 && i + b < k; ++b) {
        if ((draw >> b) & 1U) common &= ctx.row(objects[i + b]);
      }
    }
    if (common.none()) ++hits;
  }
  result.method = StabilityMethod::monte_carlo;
  result.value = opt.samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(opt.samples);
  return result;
}

/// Summed stability over a set of concepts.
inline double total_stability(const BinaryContext& ctx, const std::vector<FormalConcept>& concepts,
                              const StabilityOptions& opt = {}) {
  double sum = 0.0;
  for (const auto& c : concepts) sum += stability(ctx, c, opt).value;
  return sum;
}

}  // namespace biclust
