#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biclust/bitset.hpp"
#include "biclust/discretize.hpp"
#include "biclust/error.hpp"

namespace biclust {

enum class Algorithm { biarm, bifca_plus, bifca, nbic_arm, nbf };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::biarm: return "biarm";
    case Algorithm::bifca_plus: return "bifca_plus";
    case Algorithm::bifca: return "bifca";
    case Algorithm::nbic_arm: return "nbic_arm";
    case Algorithm::nbf: return "nbf";
  }
  return "unknown";
}

inline Algorithm parse_algorithm(std::string_view text) {
  for (auto a : {Algorithm::biarm, Algorithm::bifca_plus, Algorithm::bifca, Algorithm::nbic_arm, Algorithm::nbf}) {
    if (to_string(a) == text) return a;
  }
  throw Error("unknown algorithm '" + std::string(text) + "'");
}

/// Dimensions of the expression matrix a bicluster indexes into.
struct MatrixShape {
  std::size_t genes = 0;
  std::size_t conditions = 0;

  bool operator==(const MatrixShape&) const = default;
};

/// Pair-column footprint of biclusters mined from a trajectory matrix.
struct PairFootprint {
  PairMode mode = PairMode::all_pairs;
  IndexSet columns;

  bool operator==(const PairFootprint&) const = default;
};

struct Bicluster {
  Algorithm algorithm = Algorithm::bifca_plus;
  MatrixShape shape;
  IndexSet genes;
  IndexSet conditions;  // original condition space
  std::optional<PairFootprint> pairs;
  std::map<std::string, double> scores;

  bool operator==(const Bicluster&) const = default;

  /// Columns the bicluster was mined over: pair columns when present, otherwise conditions.
  const IndexSet& mined_columns() const { return pairs ? pairs->columns : conditions; }
};

/// Builds a pair-space bicluster; conditions are derived from the pair columns.
inline Bicluster make_pair_bicluster(Algorithm algorithm, MatrixShape shape, IndexSet genes, PairMode mode,
                                     IndexSet columns) {
  Bicluster b;
  b.algorithm = algorithm;
  b.shape = shape;
  b.genes = std::move(genes);
  const auto pairs = pair_columns(shape.conditions, mode);
  b.conditions = map_pair_columns_to_conditions(columns, pairs);
  b.pairs = PairFootprint{mode, std::move(columns)};
  return b;
}

/// Checks index ranges, non-emptiness, sortedness and the pair-column/condition correspondence.
inline void validate(const Bicluster& b) {
  auto check = [](const IndexSet& s, std::size_t universe, const char* what) {
    if (s.empty()) throw Error(std::string("bicluster has no ") + what);
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error(std::string("bicluster ") + what + " must be sorted and unique");
    if (s.back() >= universe) throw IndexError(std::string("bicluster ") + what + " index out of range");
  };
  check(b.genes, b.shape.genes, "genes");
  check(b.conditions, b.shape.conditions, "conditions");
  if (b.pairs) {
    const auto pairs = pair_columns(b.shape.conditions, b.pairs->mode);
    check(b.pairs->columns, pairs.size(), "pair columns");
    if (map_pair_columns_to_conditions(b.pairs->columns, pairs) != b.conditions)
      throw Error("bicluster conditions do not match its pair columns");
  }
}

/// Output order: |genes| desc, |conditions| desc, then the gene and condition id sequences.
inline void sort_for_output(std::vector<Bicluster>& biclusters, const std::vector<std::string>& gene_ids,
                            const std::vector<std::string>& condition_ids) {
  auto ids = [](const IndexSet& s, const std::vector<std::string>& names) {
    std::vector<std::string_view> out;
    for (auto i : s) out.push_back(names.at(i));
    return out;
  };
  std::stable_sort(biclusters.begin(), biclusters.end(), [&](const Bicluster& a, const Bicluster& b) {
    if (a.genes.size() != b.genes.size()) return a.genes.size() > b.genes.size();
    if (a.conditions.size() != b.conditions.size()) return a.conditions.size() > b.conditions.size();
    const auto ga = ids(a.genes, gene_ids);
    const auto gb = ids(b.genes, gene_ids);
    if (ga != gb) return ga < gb;
    const auto ca = ids(a.conditions, condition_ids);
    const auto cb = ids(b.conditions, condition_ids);
    if (ca != cb) return ca < cb;
    const auto& pa = a.mined_columns();
    const auto& pb = b.mined_columns();
    if (pa != pb) return lex_less(pa, pb);
    return to_string(a.algorithm) < to_string(b.algorithm);
  });
}

}  // namespace biclust
