#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "biclust/bicluster.hpp"
#include "biclust/bitset.hpp"
#include "biclust/error.hpp"
#include "biclust/io.hpp"
#include "biclust/matrix.hpp"

namespace biclust {

struct CoverageReport {
  double total_coverage = 0.0;
  double gene_coverage = 0.0;
  double condition_coverage = 0.0;
  std::size_t covered_cells = 0;
  std::size_t matrix_cells = 0;
  std::size_t covered_genes = 0;
  std::size_t covered_conditions = 0;
};

/// Share of matrix cells, genes and conditions touched by at least one bicluster.
inline CoverageReport coverage(const ExpressionMatrix& m, const std::vector<Bicluster>& biclusters) {
  const std::size_t n = m.genes();
  const std::size_t k = m.conditions();
  std::vector<Bitset> cells(n, Bitset(k));
  Bitset genes(n);
  Bitset conditions(k);
  for (const auto& b : biclusters) {
    if (b.shape != MatrixShape{n, k}) throw MatrixMismatchError("bicluster does not index this matrix");
    const Bitset cols = to_bitset(k, b.conditions);
    for (auto g : b.genes) {
      if (g >= n) throw MatrixMismatchError("bicluster gene index out of range");
      cells[g] |= cols;
      genes.set(g);
    }
    conditions |= cols;
  }
  CoverageReport r;
  r.matrix_cells = n * k;
  for (const auto& row : cells) r.covered_cells += row.count();
  r.covered_genes = genes.count();
  r.covered_conditions = conditions.count();
  r.total_coverage = static_cast<double>(r.covered_cells) / static_cast<double>(r.matrix_cells);
  r.gene_coverage = static_cast<double>(r.covered_genes) / static_cast<double>(n);
  r.condition_coverage = static_cast<double>(r.covered_conditions) / static_cast<double>(k);
  return r;
}

inline void write_coverage(std::ostream& os, const CoverageReport& r) {
  os << "metric\tvalue\n"
     << "total_coverage\t" << detail::format_double(r.total_coverage) << '\n'
     << "gene_coverage\t" << detail::format_double(r.gene_coverage) << '\n'
     << "condition_coverage\t" << detail::format_double(r.condition_coverage) << '\n'
     << "covered_cells\t" << r.covered_cells << '\n'
     << "matrix_cells\t" << r.matrix_cells << '\n';
}

/// Original expression values of the bicluster: one row per gene, one column per condition in
/// matrix order.
inline void export_profile(std::ostream& os, const ExpressionMatrix& m, const Bicluster& b) {
  validate(b);
  if (b.shape != MatrixShape{m.genes(), m.conditions()}) throw MatrixMismatchError("bicluster does not index this matrix");
  os << "gene";
  for (auto c : b.conditions) os << '\t' << m.condition_ids()[c];
  os << '\n';
  for (auto g : b.genes) {
    os << m.gene_ids()[g];
    for (auto c : b.conditions) os << '\t' << detail::format_double(m.at(g, c));
    os << '\n';
  }
}

inline void export_profile(const ExpressionMatrix& m, const Bicluster& b, const std::string& path) {
  auto out = detail::open_output(path);
  export_profile(out, m, b);
  detail::finish_output(out, path);
}

/// One gene id per line, as accepted by enrichment web services.
inline void export_gene_list(std::ostream& os, const ExpressionMatrix& m, const Bicluster& b) {
  for (auto g : b.genes) os << m.gene_ids().at(g) << '\n';
}

inline void export_gene_list(const ExpressionMatrix& m, const Bicluster& b, const std::string& path) {
  auto out = detail::open_output(path);
  export_gene_list(out, m, b);
  detail::finish_output(out, path);
}

}  // namespace biclust
