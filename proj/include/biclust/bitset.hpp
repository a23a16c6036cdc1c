#pragma once

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "biclust/error.hpp"

namespace biclust {

using Bitset = boost::dynamic_bitset<std::uint64_t>;
using IndexSet = std::vector<std::size_t>;  // sorted, unique

inline IndexSet to_indices(const Bitset& bits) {
  IndexSet out;
  out.reserve(bits.count());
  for (auto i = bits.find_first(); i != Bitset::npos; i = bits.find_next(i)) out.push_back(i);
  return out;
}

inline Bitset to_bitset(std::size_t universe, std::span<const std::size_t> indices) {
  Bitset bits(universe);
  for (std::size_t i : indices) {
    if (i >= universe) throw IndexError("index " + std::to_string(i) + " out of range " + std::to_string(universe));
    bits.set(i);
  }
  return bits;
}

inline Bitset to_bitset(std::size_t universe, std::initializer_list<std::size_t> indices) {
  return to_bitset(universe, std::span<const std::size_t>(indices.begin(), indices.size()));
}

inline Bitset full_bitset(std::size_t universe) {
  Bitset bits(universe);
  bits.set();
  return bits;
}

/// Lexicographic order on the sorted index sequences of two sets (a prefix sorts first).
inline bool lex_less(const Bitset& a, const Bitset& b) {
  auto i = a.find_first();
  auto j = b.find_first();
  while (i != Bitset::npos && j != Bitset::npos) {
    if (i != j) return i < j;
    i = a.find_next(i);
    j = b.find_next(j);
  }
  return i == Bitset::npos && j != Bitset::npos;
}

inline bool lex_less(const IndexSet& a, const IndexSet& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline std::size_t intersection_count(const Bitset& a, const Bitset& b) { return (a & b).count(); }

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::size_t intersection_size(const IndexSet& a, const IndexSet& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace biclust
