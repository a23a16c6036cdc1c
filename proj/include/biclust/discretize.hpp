#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biclust/bitset.hpp"
#include "biclust/context.hpp"
#include "biclust/error.hpp"
#include "biclust/matrix.hpp"

namespace biclust {

enum class PairMode { adjacent, all_pairs };

inline std::string_view to_string(PairMode mode) { return mode == PairMode::adjacent ? "adjacent" : "all_pairs"; }

inline PairMode parse_pair_mode(std::string_view text) {
  if (text == "adjacent") return PairMode::adjacent;
  if (text == "all_pairs" || text == "all-pairs") return PairMode::all_pairs;
  throw Error("unknown pair mode '" + std::string(text) + "'");
}

/// Ordered condition pair (left < right) behind one trajectory column.
struct PairColumn {
  std::size_t left;
  std::size_t right;

  bool operator==(const PairColumn&) const = default;
};

/// Pair columns of a mode over m conditions: (k, k+1) for adjacent, (l, l2) with l < l2 in
/// lexicographic order for all pairs.
inline std::vector<PairColumn> pair_columns(std::size_t conditions, PairMode mode) {
  std::vector<PairColumn> out;
  if (conditions < 2) return out;
  if (mode == PairMode::adjacent) {
    for (std::size_t k = 0; k + 1 < conditions; ++k) out.push_back({k, k + 1});
  } else {
    for (std::size_t l = 0; l + 1 < conditions; ++l)
      for (std::size_t l2 = l + 1; l2 < conditions; ++l2) out.push_back({l, l2});
  }
  return out;
}

/// Sign of the change between two conditions for every gene: +1 up, -1 down, 0 unchanged.
class TrajectoryMatrix {
 public:
  TrajectoryMatrix(std::vector<std::string> gene_ids, std::vector<std::string> condition_ids, PairMode mode,
                   std::vector<std::int8_t> values)
      : gene_ids_(std::move(gene_ids)),
        condition_ids_(std::move(condition_ids)),
        mode_(mode),
        pairs_(pair_columns(condition_ids_.size(), mode)),
        values_(std::move(values)) {
    if (values_.size() != gene_ids_.size() * pairs_.size()) throw Error("trajectory value count mismatch");
    for (auto v : values_) {
      if (v < -1 || v > 1) throw Error("trajectory entries must be -1, 0 or +1");
    }
  }

  std::size_t genes() const noexcept { return gene_ids_.size(); }
  std::size_t columns() const noexcept { return pairs_.size(); }
  PairMode mode() const noexcept { return mode_; }

  const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }
  const std::vector<std::string>& condition_ids() const noexcept { return condition_ids_; }
  const std::vector<PairColumn>& pairs() const noexcept { return pairs_; }

  int at(std::size_t gene, std::size_t column) const { return values_[gene * columns() + column]; }

  std::vector<int> row(std::size_t gene) const {
    std::vector<int> out(columns());
    for (std::size_t k = 0; k < columns(); ++k) out[k] = at(gene, k);
    return out;
  }

  /// Column label "C<k>" (1-based), matching the customary naming of pair columns.
  static std::string column_label(std::size_t k) { return "C" + std::to_string(k + 1); }

  /// Descriptive label "<left>~<right>" built from condition ids.
  std::string pair_label(std::size_t k) const {
    return condition_ids_[pairs_[k].left] + "~" + condition_ids_[pairs_[k].right];
  }

  std::vector<std::string> column_labels() const {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < columns(); ++k) out.push_back(column_label(k));
    return out;
  }

  const std::vector<std::int8_t>& values() const noexcept { return values_; }

  bool operator==(const TrajectoryMatrix&) const = default;

 private:
  std::vector<std::string> gene_ids_;
  std::vector<std::string> condition_ids_;
  PairMode mode_;
  std::vector<PairColumn> pairs_;
  std::vector<std::int8_t> values_;
};

/// Trajectory matrix of `matrix`. Differences with |right - left| <= epsilon count as unchanged;
/// the default epsilon of 0 compares values exactly.
inline TrajectoryMatrix trajectory(const ExpressionMatrix& matrix, PairMode mode, double epsilon = 0.0) {
  if (epsilon < 0.0 || !std::isfinite(epsilon)) throw ConfigError("epsilon must be a finite value >= 0");
  const auto pairs = pair_columns(matrix.conditions(), mode);
  std::vector<std::int8_t> values;
  values.reserve(matrix.genes() * pairs.size());
  for (std::size_t g = 0; g < matrix.genes(); ++g) {
    const auto row = matrix.row(g);
    for (const auto& p : pairs) {
      const double diff = row[p.right] - row[p.left];
      if (std::abs(diff) <= epsilon)
        values.push_back(0);
      else
        values.push_back(diff > 0 ? 1 : -1);
    }
  }
  return TrajectoryMatrix(matrix.gene_ids(), matrix.condition_ids(), mode, std::move(values));
}

namespace detail {

/// Target symbol of one trajectory column, or nullopt when the column carries a single symbol.
///
/// Counts of -1, 0, +1 are taken over the symbols that occur. With three symbols the target has the
/// middle count; with two, the smaller count. Count ties resolve in the order -1, +1, 0.
inline std::optional<int> target_symbol(const std::array<std::size_t, 3>& counts /* -1, 0, +1 */) {
  constexpr std::array<int, 3> preference{-1, 1, 0};
  auto count_of = [&](int s) { return counts[static_cast<std::size_t>(s + 1)]; };
  std::vector<std::size_t> present;
  for (int s : preference) {
    if (count_of(s) > 0) present.push_back(count_of(s));
  }
  if (present.size() <= 1) return std::nullopt;
  std::sort(present.begin(), present.end());
  const std::size_t wanted = present.size() == 3 ? present[1] : present[0];
  for (int s : preference) {
    if (count_of(s) == wanted) return s;
  }
  return std::nullopt;
}

inline BinaryContext empty_pair_context(const TrajectoryMatrix& traj) {
  return BinaryContext(traj.gene_ids(), traj.column_labels());
}

}  // namespace detail

/// Marks, per column, the cells carrying that column's target symbol (see detail::target_symbol).
inline BinaryContext binarize_by_symbol_frequency(const TrajectoryMatrix& traj) {
  BinaryContext ctx = detail::empty_pair_context(traj);
  for (std::size_t k = 0; k < traj.columns(); ++k) {
    std::array<std::size_t, 3> counts{0, 0, 0};
    for (std::size_t g = 0; g < traj.genes(); ++g) ++counts[static_cast<std::size_t>(traj.at(g, k) + 1)];
    const auto target = detail::target_symbol(counts);
    if (!target) continue;
    for (std::size_t g = 0; g < traj.genes(); ++g) {
      if (traj.at(g, k) == *target) ctx.set(g, k);
    }
  }
  return ctx;
}

/// Up-regulation (+1) and down-regulation (-1) indicator contexts over the same pair columns.
struct SignedContextPair {
  BinaryContext positive;
  BinaryContext negative;
  std::vector<PairColumn> pairs;
  PairMode mode;
};

inline SignedContextPair binarize_signs(const TrajectoryMatrix& traj) {
  SignedContextPair out{detail::empty_pair_context(traj), detail::empty_pair_context(traj), traj.pairs(),
                        traj.mode()};
  for (std::size_t g = 0; g < traj.genes(); ++g) {
    for (std::size_t k = 0; k < traj.columns(); ++k) {
      const int v = traj.at(g, k);
      if (v > 0) out.positive.set(g, k);
      if (v < 0) out.negative.set(g, k);
    }
  }
  return out;
}

/// Union of the two conditions behind each selected pair column.
inline IndexSet map_pair_columns_to_conditions(std::span<const std::size_t> columns,
                                               const std::vector<PairColumn>& pairs) {
  std::vector<bool> used;
  for (std::size_t k : columns) {
    if (k >= pairs.size())
      throw IndexError("pair column " + std::to_string(k) + " out of range " + std::to_string(pairs.size()));
    const auto& p = pairs[k];
    if (used.size() <= p.right) used.resize(p.right + 1, false);
    used[p.left] = true;
    used[p.right] = true;
  }
  IndexSet out;
  for (std::size_t c = 0; c < used.size(); ++c) {
    if (used[c]) out.push_back(c);
  }
  return out;
}

}  // namespace biclust
