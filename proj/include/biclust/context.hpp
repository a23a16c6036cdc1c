#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "biclust/bitset.hpp"
#include "biclust/error.hpp"
#include "biclust/matrix.hpp"

namespace biclust {

/// Formal context (objects, attributes, incidence) with row and column indexes kept as transposes.
class BinaryContext {
 public:
  BinaryContext() = default;

  BinaryContext(std::vector<std::string> object_ids, std::vector<std::string> attribute_ids)
      : object_ids_(std::move(object_ids)),
        attribute_ids_(std::move(attribute_ids)),
        rows_(object_ids_.size(), Bitset(attribute_ids_.size())),
        cols_(attribute_ids_.size(), Bitset(object_ids_.size())) {}

  BinaryContext(std::vector<std::string> object_ids, std::vector<std::string> attribute_ids,
                const std::vector<std::vector<bool>>& relation)
      : BinaryContext(std::move(object_ids), std::move(attribute_ids)) {
    if (relation.size() != objects()) throw Error("relation row count does not match object ids");
    for (std::size_t o = 0; o < objects(); ++o) {
      if (relation[o].size() != attributes()) throw Error("relation column count does not match attribute ids");
      for (std::size_t a = 0; a < attributes(); ++a) {
        if (relation[o][a]) set(o, a);
      }
    }
  }

  explicit BinaryContext(const RawBinaryContext& raw)
      : BinaryContext(raw.object_ids, raw.attribute_ids, raw.relation) {}

  /// Builds a context with generated ids ("o1".., "a1"..) from a 0/1 grid.
  static BinaryContext from_rows(const std::vector<std::vector<int>>& grid) {
    const std::size_t n = grid.size();
    const std::size_t m = n == 0 ? 0 : grid.front().size();
    std::vector<std::string> objs, attrs;
    for (std::size_t o = 0; o < n; ++o) objs.push_back("o" + std::to_string(o + 1));
    for (std::size_t a = 0; a < m; ++a) attrs.push_back("a" + std::to_string(a + 1));
    BinaryContext ctx(std::move(objs), std::move(attrs));
    for (std::size_t o = 0; o < n; ++o) {
      if (grid[o].size() != m) throw Error("ragged 0/1 grid");
      for (std::size_t a = 0; a < m; ++a) {
        if (grid[o][a]) ctx.set(o, a);
      }
    }
    return ctx;
  }

  void set(std::size_t object, std::size_t attribute) {
    check_object(object);
    check_attribute(attribute);
    rows_[object].set(attribute);
    cols_[attribute].set(object);
  }

  std::size_t objects() const noexcept { return object_ids_.size(); }
  std::size_t attributes() const noexcept { return attribute_ids_.size(); }

  const std::vector<std::string>& object_ids() const noexcept { return object_ids_; }
  const std::vector<std::string>& attribute_ids() const noexcept { return attribute_ids_; }

  bool has(std::size_t object, std::size_t attribute) const { return rows_[object].test(attribute); }

  /// Attributes of one object.
  const Bitset& row(std::size_t object) const { return rows_[object]; }
  /// Objects having one attribute.
  const Bitset& column(std::size_t attribute) const { return cols_[attribute]; }

  Bitset all_objects() const { return full_bitset(objects()); }
  Bitset all_attributes() const { return full_bitset(attributes()); }
  Bitset no_objects() const { return Bitset(objects()); }
  Bitset no_attributes() const { return Bitset(attributes()); }

  RawBinaryContext to_raw() const {
    RawBinaryContext raw{object_ids_, attribute_ids_, {}};
    raw.relation.assign(objects(), std::vector<bool>(attributes(), false));
    for (std::size_t o = 0; o < objects(); ++o) {
      for (std::size_t a = 0; a < attributes(); ++a) raw.relation[o][a] = has(o, a);
    }
    return raw;
  }

  bool operator==(const BinaryContext& other) const {
    return object_ids_ == other.object_ids_ && attribute_ids_ == other.attribute_ids_ && rows_ == other.rows_;
  }

  void check_object(std::size_t o) const {
    if (o >= objects()) throw IndexError("object index " + std::to_string(o) + " out of range");
  }
  void check_attribute(std::size_t a) const {
    if (a >= attributes()) throw IndexError("attribute index " + std::to_string(a) + " out of range");
  }

 private:
  std::vector<std::string> object_ids_;
  std::vector<std::string> attribute_ids_;
  std::vector<Bitset> rows_;
  std::vector<Bitset> cols_;
};

namespace detail {

inline void check_universe(const Bitset& set, std::size_t expected, const char* what) {
  if (set.size() != expected)
    throw IndexError(std::string(what) + " set sized " + std::to_string(set.size()) + ", context has " +
                     std::to_string(expected));
}

}  // namespace detail

/// Attributes shared by every given object; the empty object set maps to all attributes.
inline Bitset intent_of(const BinaryContext& ctx, const Bitset& objects) {
  detail::check_universe(objects, ctx.objects(), "object");
  Bitset out = ctx.all_attributes();
  for (auto o = objects.find_first(); o != Bitset::npos; o = objects.find_next(o)) out &= ctx.row(o);
  return out;
}

/// Objects having every given attribute; the empty attribute set maps to all objects.
inline Bitset extent_of(const BinaryContext& ctx, const Bitset& attributes) {
  detail::check_universe(attributes, ctx.attributes(), "attribute");
  Bitset out = ctx.all_objects();
  for (auto a = attributes.find_first(); a != Bitset::npos; a = attributes.find_next(a)) out &= ctx.column(a);
  return out;
}

inline Bitset intent_of(const BinaryContext& ctx, std::span<const std::size_t> objects) {
  return intent_of(ctx, to_bitset(ctx.objects(), objects));
}

inline Bitset extent_of(const BinaryContext& ctx, std::span<const std::size_t> attributes) {
  return extent_of(ctx, to_bitset(ctx.attributes(), attributes));
}

/// Itemset closure: intent_of(extent_of(attributes)).
inline Bitset close_itemset(const BinaryContext& ctx, const Bitset& attributes) {
  return intent_of(ctx, extent_of(ctx, attributes));
}

/// Objset closure: extent_of(intent_of(objects)).
inline Bitset close_objects(const BinaryContext& ctx, const Bitset& objects) {
  return extent_of(ctx, intent_of(ctx, objects));
}

}  // namespace biclust
