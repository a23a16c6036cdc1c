#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "biclust/error.hpp"

namespace biclust {

namespace detail {

inline void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw Error(std::string("duplicate ") + what + " id '" + id + "'");
  }
}

}  // namespace detail

/// Genes x conditions grid of finite expression levels, row-major.
class ExpressionMatrix {
 public:
  ExpressionMatrix(std::vector<std::string> gene_ids, std::vector<std::string> condition_ids,
                   std::vector<double> values)
      : gene_ids_(std::move(gene_ids)), condition_ids_(std::move(condition_ids)), values_(std::move(values)) {
    if (gene_ids_.empty()) throw Error("expression matrix needs at least one gene");
    if (condition_ids_.size() < 2) throw Error("expression matrix needs at least two conditions");
    if (values_.size() != gene_ids_.size() * condition_ids_.size())
      throw Error("expression matrix value count does not match its dimensions");
    for (double v : values_) {
      if (!std::isfinite(v)) throw Error("expression matrix values must be finite");
    }
    detail::require_unique(gene_ids_, "gene");
    detail::require_unique(condition_ids_, "condition");
  }

  /// Convenience constructor from nested rows.
  ExpressionMatrix(std::vector<std::string> gene_ids, std::vector<std::string> condition_ids,
                   const std::vector<std::vector<double>>& rows)
      : ExpressionMatrix(std::move(gene_ids), std::move(condition_ids), flatten(rows)) {}

  std::size_t genes() const noexcept { return gene_ids_.size(); }
  std::size_t conditions() const noexcept { return condition_ids_.size(); }

  const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }
  const std::vector<std::string>& condition_ids() const noexcept { return condition_ids_; }

  double at(std::size_t gene, std::size_t condition) const { return values_[gene * conditions() + condition]; }

  std::span<const double> row(std::size_t gene) const {
    return std::span<const double>(values_).subspan(gene * conditions(), conditions());
  }

  const std::vector<double>& values() const noexcept { return values_; }

  bool operator==(const ExpressionMatrix&) const = default;

 private:
  static std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
    std::vector<double> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
  }

  std::vector<std::string> gene_ids_;
  std::vector<std::string> condition_ids_;
  std::vector<double> values_;
};

/// Boolean object x attribute grid as read from disk, before indexing.
struct RawBinaryContext {
  std::vector<std::string> object_ids;
  std::vector<std::string> attribute_ids;
  std::vector<std::vector<bool>> relation;  // relation[object][attribute]

  bool operator==(const RawBinaryContext&) const = default;
};

}  // namespace biclust
