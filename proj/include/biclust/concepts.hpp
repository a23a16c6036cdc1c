#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "biclust/bitset.hpp"
#include "biclust/context.hpp"
#include "biclust/error.hpp"

namespace biclust {

struct FormalConcept {
  Bitset extent;  // objects
  Bitset intent;  // attributes

  bool operator==(const FormalConcept&) const = default;
};

/// Canonical concept order: intent lexicographic, then extent lexicographic.
inline bool concept_less(const FormalConcept& a, const FormalConcept& b) {
  if (a.intent != b.intent) return lex_less(a.intent, b.intent);
  return lex_less(a.extent, b.extent);
}

struct EnumerationOptions {
  std::size_t min_extent = 1;
  std::size_t min_intent = 1;
  std::size_t max_concepts = 0;  // 0 = unlimited
  unsigned jobs = 1;
};

namespace detail {

class ConceptMiner {
 public:
  ConceptMiner(const BinaryContext& ctx, const EnumerationOptions& opt, std::atomic<std::size_t>& emitted)
      : ctx_(ctx), opt_(opt), emitted_(emitted) {}

  struct Node {
    Bitset extent;
    Bitset intent;
    std::size_t core;  // attribute that produced this node; attributes() for the root
  };

  Node root() const {
    Bitset extent = ctx_.all_objects();
    return {extent, intent_of(ctx_, extent), ctx_.attributes()};
  }

  /// Prefix-preserving closure extensions of `node`.
  std::vector<Node> children(const Node& node) const {
    std::vector<Node> out;
    const std::size_t m = ctx_.attributes();
    const std::size_t first = node.core == m ? 0 : node.core + 1;
    for (std::size_t j = first; j < m; ++j) {
      if (node.intent.test(j)) continue;
      Bitset extent = node.extent & ctx_.column(j);
      if (extent.count() < opt_.min_extent || extent.none()) continue;
      Bitset intent;
      if (!closure_preserves_prefix(extent, node.intent, j, intent)) continue;
      out.push_back({std::move(extent), std::move(intent), j});
    }
    return out;
  }

  void emit(const Node& node, std::vector<FormalConcept>& out) const {
    if (node.extent.count() < opt_.min_extent || node.intent.count() < opt_.min_intent) return;
    const std::size_t total = emitted_.fetch_add(1) + 1;
    if (opt_.max_concepts != 0 && total > opt_.max_concepts)
      throw CapacityError("concept budget of " + std::to_string(opt_.max_concepts) + " exceeded");
    out.push_back({node.extent, node.intent});
  }

  void walk(const Node& node, std::vector<FormalConcept>& out) const {
    emit(node, out);
    for (const Node& child : children(node)) walk(child, out);
  }

 private:
  // Computes intent_of(extent) into `intent`; fails fast if the closure adds an attribute below `j`
  // that the parent intent lacks.
  bool closure_preserves_prefix(const Bitset& extent, const Bitset& parent, std::size_t j, Bitset& intent) const {
    const std::size_t m = ctx_.attributes();
    const std::size_t row_words = (m + 63) / 64;
    const std::size_t col_words = (ctx_.objects() + 63) / 64;
    if (extent.count() * row_words <= m * col_words) {
      intent = ctx_.all_attributes();
      for (auto o = extent.find_first(); o != Bitset::npos; o = extent.find_next(o)) intent &= ctx_.row(o);
      Bitset added = intent - parent;
      const auto lowest = added.find_first();
      return lowest == Bitset::npos || lowest >= j;
    }
    intent = parent;
    for (std::size_t a = 0; a < m; ++a) {
      if (parent.test(a)) continue;
      if (extent.is_subset_of(ctx_.column(a))) {
        if (a < j) return false;
        intent.set(a);
      }
    }
    return true;
  }

  const BinaryContext& ctx_;
  const EnumerationOptions& opt_;
  std::atomic<std::size_t>& emitted_;
};

}  // namespace detail

/// All formal concepts with |extent| >= min_extent and |intent| >= min_intent, sorted by concept_less.
///
/// Closed intents are enumerated depth-first by prefix-preserving closure extension, so each concept
/// is reached exactly once. With jobs > 1 the subtrees below the root are mined concurrently; the
/// final sort makes the result independent of scheduling.
inline std::vector<FormalConcept> enumerate_concepts(const BinaryContext& ctx, const EnumerationOptions& opt = {}) {
  if (opt.min_extent < 1 || opt.min_intent < 1) throw ConfigError("min_extent and min_intent must be >= 1");
  std::vector<FormalConcept> out;
  if (ctx.objects() == 0 || ctx.objects() < opt.min_extent) return out;

  std::atomic<std::size_t> emitted{0};
  detail::ConceptMiner miner(ctx, opt, emitted);
  const auto root = miner.root();
  miner.emit(root, out);
  const auto branches = miner.children(root);

  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(branches.size())));
  if (jobs <= 1) {
    for (const auto& b : branches) miner.walk(b, out);
  } else {
    std::vector<std::vector<FormalConcept>> parts(branches.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        try {
          for (std::size_t i = next.fetch_add(1); i < branches.size(); i = next.fetch_add(1))
            miner.walk(branches[i], parts[i]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(branches.size());
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  std::sort(out.begin(), out.end(), concept_less);
  return out;
}

inline std::vector<FormalConcept> enumerate_concepts(const BinaryContext& ctx, std::size_t min_extent,
                                                     std::size_t min_intent) {
  EnumerationOptions opt;
  opt.min_extent = min_extent;
  opt.min_intent = min_intent;
  return enumerate_concepts(ctx, opt);
}

}  // namespace biclust
