#pragma once

// Brute-force reference implementations. They work on plain boolean grids and bit masks so that they
// share no code with the library beyond the final comparison.

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "biclust/biclust.hpp"

namespace oracle {

using Grid = std::vector<std::vector<bool>>;
using Mask = std::uint32_t;

inline Grid random_grid(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double density) {
  std::bernoulli_distribution bit(density);
  Grid g(rows, std::vector<bool>(cols));
  for (auto& r : g)
    for (std::size_t c = 0; c < cols; ++c) r[c] = bit(rng);
  return g;
}

inline biclust::BinaryContext to_context(const Grid& g, std::size_t cols) {
  std::vector<std::string> objs;
  std::vector<std::string> attrs;
  for (std::size_t i = 0; i < g.size(); ++i) objs.push_back("o" + std::to_string(i));
  for (std::size_t j = 0; j < cols; ++j) attrs.push_back("a" + std::to_string(j));
  biclust::BinaryContext ctx(objs, attrs);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (g[i][j]) ctx.set(i, j);
  return ctx;
}

inline Mask row_mask(const Grid& g, std::size_t i) {
  Mask m = 0;
  for (std::size_t j = 0; j < g[i].size(); ++j)
    if (g[i][j]) m |= Mask{1} << j;
  return m;
}

/// Objects (as a mask over rows) having every attribute of `attrs`.
inline Mask extent(const Grid& g, Mask attrs) {
  Mask e = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if ((row_mask(g, i) & attrs) == attrs) e |= Mask{1} << i;
  return e;
}

/// Attributes shared by every object of `objs`.
inline Mask intent(const Grid& g, Mask objs, std::size_t cols) {
  Mask in = cols == 32 ? ~Mask{0} : (Mask{1} << cols) - 1;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (objs >> i & 1U) in &= row_mask(g, i);
  return in;
}

inline std::size_t popcount(Mask m) { return static_cast<std::size_t>(__builtin_popcount(m)); }

inline Mask to_mask(const biclust::Bitset& b) {
  Mask m = 0;
  for (auto i = b.find_first(); i != biclust::Bitset::npos; i = b.find_next(i)) m |= Mask{1} << i;
  return m;
}

using ConceptKey = std::pair<Mask, Mask>;  // extent, intent

/// Every closed attribute set found by closing all 2^cols subsets.
inline std::set<ConceptKey> concepts(const Grid& g, std::size_t cols, std::size_t min_extent, std::size_t min_intent) {
  std::set<ConceptKey> out;
  for (Mask x = 0; x < (Mask{1} << cols); ++x) {
    const Mask e = extent(g, x);
    const Mask i = intent(g, e, cols);
    if (popcount(e) >= min_extent && popcount(i) >= min_intent) out.emplace(e, i);
  }
  return out;
}

inline std::set<ConceptKey> keys_of(const std::vector<biclust::FormalConcept>& cs) {
  std::set<ConceptKey> out;
  for (const auto& c : cs) out.emplace(to_mask(c.extent), to_mask(c.intent));
  return out;
}

using RuleKey = std::tuple<Mask, Mask, std::size_t, std::size_t>;  // premise, conclusion, supp, premise supp

/// The informative generic basis straight from its definition, over all attribute subsets.
inline std::set<RuleKey> igb(const Grid& g, std::size_t cols, double minsupp, double minconf) {
  const std::size_t n = g.size();
  const Mask all = (Mask{1} << cols) - 1;
  std::vector<std::size_t> supp(all + 1);
  std::vector<Mask> closure(all + 1);
  for (Mask x = 0; x <= all; ++x) {
    const Mask e = extent(g, x);
    supp[x] = popcount(e);
    closure[x] = intent(g, e, cols);
  }
  std::size_t min_count = 1;
  while (static_cast<double>(min_count) < minsupp * static_cast<double>(n) - 1e-9) ++min_count;
  auto confident = [&](std::size_t num, std::size_t den) {
    return static_cast<double>(num) + 1e-9 >= minconf * static_cast<double>(den);
  };
  auto minimal_generator = [&](Mask gs) {
    if (gs == 0) return true;  // no proper subsets
    for (Mask sub = (gs - 1) & gs;; sub = (sub - 1) & gs) {
      if (closure[sub] == closure[gs]) return false;
      if (sub == 0) break;
    }
    return true;
  };
  std::set<RuleKey> out;
  for (Mask i = 1; i <= all; ++i) {
    if (closure[i] != i || supp[i] < min_count || supp[i] == 0) continue;
    for (Mask gs = i;; gs = (gs - 1) & i) {
      if (gs != i && minimal_generator(gs) && confident(supp[i], supp[gs])) {
        bool minimal_premise = true;
        if (gs != 0) {
          for (Mask sub = (gs - 1) & gs;; sub = (sub - 1) & gs) {
            if (confident(supp[i], supp[sub])) {
              minimal_premise = false;
              break;
            }
            if (sub == 0) break;
          }
        }
        if (minimal_premise) out.emplace(gs, i & ~gs, supp[i], supp[gs]);
      }
      if (gs == 0) break;
    }
  }
  return out;
}

inline std::set<RuleKey> keys_of(const std::vector<biclust::GenericRule>& rules) {
  std::set<RuleKey> out;
  for (const auto& r : rules) out.emplace(to_mask(r.premise), to_mask(r.conclusion), r.support_count, r.premise_count);
  return out;
}

/// Number of subsets of the extent whose common attributes are exactly the intent.
inline std::uint64_t stable_subsets(const Grid& g, std::size_t cols, Mask ext, Mask in) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (ext >> i & 1U) members.push_back(i);
  std::uint64_t count = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << members.size()); ++s) {
    Mask objs = 0;
    for (std::size_t b = 0; b < members.size(); ++b)
      if (s >> b & 1U) objs |= Mask{1} << members[b];
    if (intent(g, objs, cols) == in) ++count;
  }
  return count;
}

/// Random expression matrix with small integer levels, so that ties (unchanged pairs) occur.
inline biclust::ExpressionMatrix random_matrix(std::mt19937_64& rng, std::size_t genes, std::size_t conditions,
                                               int levels = 6) {
  std::uniform_int_distribution<int> v(0, levels - 1);
  std::vector<std::vector<double>> rows(genes, std::vector<double>(conditions));
  for (auto& r : rows)
    for (auto& x : r) x = v(rng);
  return biclust::ExpressionMatrix(biclust::golden::labels("g", genes), biclust::golden::labels("c", conditions),
                                   rows);
}

/// Random matrix with planted up/down structure: half of a gene block follows a profile, half its mirror.
inline biclust::ExpressionMatrix planted_matrix(std::mt19937_64& rng, std::size_t genes, std::size_t conditions) {
  std::uniform_real_distribution<double> noise(0.0, 10.0);
  std::vector<std::vector<double>> rows(genes, std::vector<double>(conditions));
  std::vector<double> profile(conditions);
  for (auto& p : profile) p = noise(rng);
  for (std::size_t g = 0; g < genes; ++g) {
    for (std::size_t c = 0; c < conditions; ++c) {
      if (g < genes / 3) rows[g][c] = profile[c] + static_cast<double>(g);
      else if (g < 2 * genes / 3) rows[g][c] = 20.0 - profile[c];
      else rows[g][c] = noise(rng);
    }
  }
  return biclust::ExpressionMatrix(biclust::golden::labels("g", genes), biclust::golden::labels("c", conditions),
                                   rows);
}

/// True when the genes split into two groups with opposite non-zero signs on every pair column.
inline bool sign_partition(const biclust::TrajectoryMatrix& traj, const biclust::Bicluster& b) {
  if (!b.pairs) return false;
  const auto& cols = b.pairs->columns;
  const auto ref = b.genes.front();
  for (auto g : b.genes) {
    bool same = true;
    bool opposite = true;
    for (auto k : cols) {
      const int s = traj.at(g, k);
      const int r = traj.at(ref, k);
      if (s == 0 || r == 0) return false;
      same = same && s == r;
      opposite = opposite && s == -r;
    }
    if (!same && !opposite) return false;
  }
  return true;
}

}  // namespace oracle
