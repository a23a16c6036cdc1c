#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "biclust/bicluster.hpp"
#include "biclust/context.hpp"
#include "biclust/discretize.hpp"
#include "biclust/error.hpp"
#include "biclust/matrix.hpp"

namespace biclust {

enum class TableFormat { tsv, csv };
enum class OutputFormat { json, tsv };

inline TableFormat parse_table_format(std::string_view text) {
  if (text == "tsv") return TableFormat::tsv;
  if (text == "csv") return TableFormat::csv;
  throw Error("unknown table format '" + std::string(text) + "'");
}

inline OutputFormat parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::json;
  if (text == "tsv") return OutputFormat::tsv;
  throw Error("unknown output format '" + std::string(text) + "'");
}

/// Guesses the table format from a file extension (".csv" -> csv, anything else -> tsv).
inline TableFormat table_format_for(const std::string& path) {
  const auto dot = path.rfind('.');
  return dot != std::string::npos && path.substr(dot) == ".csv" ? TableFormat::csv : TableFormat::tsv;
}

namespace detail {

inline char separator(TableFormat fmt) { return fmt == TableFormat::csv ? ',' : '\t'; }

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Line {
  std::size_t number;  // 1-based physical line
  std::vector<std::string> fields;
};

/// Non-blank lines split into trimmed fields.
inline std::vector<Line> read_table(std::istream& in, char sep) {
  std::vector<Line> out;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (number == 1 && text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
    if (trim(text).empty()) continue;
    out.push_back({number, split_fields(text, sep)});
  }
  return out;
}

inline bool is_missing_token(std::string_view s) {
  static constexpr std::string_view tokens[] = {"", "NA", "N/A", "NaN", "nan", "NAN", "null", "NULL", "?", "-"};
  return std::find(std::begin(tokens), std::end(tokens), s) != std::end(tokens);
}

inline std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Shortest text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::vector<std::string> header_ids(const std::string& path, const Line& header, std::size_t columns) {
  std::vector<std::string> ids = header.fields;
  if (ids.size() == columns + 1) {
    ids.erase(ids.begin());  // corner cell
  } else if (ids.size() != columns) {
    throw ParseError(path, header.number, 0,
                     "header has " + std::to_string(header.fields.size()) + " fields, expected " +
                         std::to_string(columns) + " or " + std::to_string(columns + 1));
  }
  for (std::size_t c = 0; c < ids.size(); ++c) {
    if (ids[c].empty()) throw ParseError(path, header.number, c + 2, "empty column id");
  }
  return ids;
}

inline void check_unique_ids(const std::string& path, const std::vector<std::string>& ids,
                             const std::vector<std::size_t>& rows, std::size_t column, const char* what) {
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seen.emplace(ids[i], i).second) {
      throw ParseError(path, rows.empty() ? 1 : rows[i], rows.empty() ? i + column : column,
                       std::string("duplicate ") + what + " id '" + ids[i] + "'");
    }
  }
}

struct ParsedGrid {
  std::vector<std::string> row_ids;
  std::vector<std::string> column_ids;
  std::vector<Line> rows;
};

inline ParsedGrid parse_grid(std::istream& in, const std::string& path, TableFormat fmt, bool allow_no_rows) {
  auto lines = read_table(in, separator(fmt));
  if (lines.empty()) throw ParseError(path, 0, 0, "file is empty");
  if (lines.size() == 1 && !allow_no_rows) throw ParseError(path, lines[0].number, 0, "no data rows");
  ParsedGrid grid;
  const std::size_t columns =
      lines.size() > 1 ? lines[1].fields.size() - 1 : lines[0].fields.size() - (lines[0].fields.size() > 0 ? 1 : 0);
  grid.column_ids = header_ids(path, lines[0], columns);
  std::vector<std::size_t> row_numbers;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto& line = lines[r];
    if (line.fields.size() != columns + 1) {
      throw ParseError(path, line.number, 0,
                       "row has " + std::to_string(line.fields.size()) + " fields, expected " +
                           std::to_string(columns + 1));
    }
    if (line.fields[0].empty()) throw ParseError(path, line.number, 1, "empty row id");
    grid.row_ids.push_back(line.fields[0]);
    row_numbers.push_back(line.number);
    grid.rows.push_back(std::move(line));
  }
  check_unique_ids(path, grid.row_ids, row_numbers, 1, "row");
  check_unique_ids(path, grid.column_ids, {}, 2, "column");
  return grid;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline void check_writable_id(const std::string& id, char sep) {
  if (id.find(sep) != std::string::npos || id.find('\n') != std::string::npos)
    throw IoError("id '" + id + "' contains a separator or newline");
}

}  // namespace detail

/// Reads an expression matrix: header row of condition ids (the corner cell is optional), then one
/// row per gene. Missing-value tokens, non-numeric and non-finite cells are rejected.
inline ExpressionMatrix read_expression_matrix(std::istream& in, const std::string& path, TableFormat fmt) {
  auto grid = detail::parse_grid(in, path, fmt, false);
  const std::size_t m = grid.column_ids.size();
  if (m < 2) throw ParseError(path, grid.rows.front().number, 0, "need at least two conditions");
  std::vector<double> values;
  values.reserve(grid.row_ids.size() * m);
  for (const auto& line : grid.rows) {
    for (std::size_t c = 1; c <= m; ++c) {
      const std::string& cell = line.fields[c];
      if (detail::is_missing_token(cell)) throw ParseError(path, line.number, c + 1, "missing value '" + cell + "'");
      const auto v = detail::parse_double(cell);
      if (!v) throw ParseError(path, line.number, c + 1, "not a number: '" + cell + "'");
      if (!std::isfinite(*v)) throw ParseError(path, line.number, c + 1, "non-finite value '" + cell + "'");
      values.push_back(*v);
    }
  }
  return ExpressionMatrix(std::move(grid.row_ids), std::move(grid.column_ids), std::move(values));
}

inline ExpressionMatrix load_expression_matrix(const std::string& path, TableFormat fmt) {
  auto in = detail::open_input(path);
  return read_expression_matrix(in, path, fmt);
}

inline ExpressionMatrix load_expression_matrix(const std::string& path) {
  return load_expression_matrix(path, table_format_for(path));
}

/// Writes `matrix` so that reading it back reproduces every value bit for bit.
inline void write_expression_matrix(std::ostream& os, const ExpressionMatrix& matrix, TableFormat fmt) {
  const char sep = detail::separator(fmt);
  os << "gene";
  for (const auto& c : matrix.condition_ids()) {
    detail::check_writable_id(c, sep);
    os << sep << c;
  }
  os << '\n';
  for (std::size_t g = 0; g < matrix.genes(); ++g) {
    detail::check_writable_id(matrix.gene_ids()[g], sep);
    os << matrix.gene_ids()[g];
    for (double v : matrix.row(g)) os << sep << detail::format_double(v);
    os << '\n';
  }
}

inline void write_expression_matrix(const ExpressionMatrix& matrix, const std::string& path, TableFormat fmt) {
  auto out = detail::open_output(path);
  write_expression_matrix(out, matrix, fmt);
  detail::finish_output(out, path);
}

/// Reads a 0/1 context with the same layout as an expression matrix.
inline RawBinaryContext read_binary_context(std::istream& in, const std::string& path, TableFormat fmt) {
  auto grid = detail::parse_grid(in, path, fmt, true);
  RawBinaryContext raw;
  raw.object_ids = std::move(grid.row_ids);
  raw.attribute_ids = std::move(grid.column_ids);
  for (const auto& line : grid.rows) {
    std::vector<bool> row;
    for (std::size_t c = 1; c < line.fields.size(); ++c) {
      const std::string& cell = line.fields[c];
      if (cell != "0" && cell != "1") throw ParseError(path, line.number, c + 1, "expected 0 or 1, got '" + cell + "'");
      row.push_back(cell == "1");
    }
    raw.relation.push_back(std::move(row));
  }
  return raw;
}

inline RawBinaryContext load_binary_context(const std::string& path, TableFormat fmt) {
  auto in = detail::open_input(path);
  return read_binary_context(in, path, fmt);
}

inline RawBinaryContext load_binary_context(const std::string& path) {
  return load_binary_context(path, table_format_for(path));
}

inline void write_binary_context(std::ostream& os, const BinaryContext& ctx, TableFormat fmt = TableFormat::tsv) {
  const char sep = detail::separator(fmt);
  os << "object";
  for (const auto& a : ctx.attribute_ids()) os << sep << a;
  os << '\n';
  for (std::size_t o = 0; o < ctx.objects(); ++o) {
    os << ctx.object_ids()[o];
    for (std::size_t a = 0; a < ctx.attributes(); ++a) os << sep << (ctx.has(o, a) ? '1' : '0');
    os << '\n';
  }
}

/// Trajectory dump: one column per pair, labelled C1.., followed by a legend of the pairs.
inline void write_trajectory(std::ostream& os, const TrajectoryMatrix& traj) {
  os << "gene";
  for (std::size_t k = 0; k < traj.columns(); ++k) os << '\t' << TrajectoryMatrix::column_label(k);
  os << '\n';
  for (std::size_t g = 0; g < traj.genes(); ++g) {
    os << traj.gene_ids()[g];
    for (std::size_t k = 0; k < traj.columns(); ++k) os << '\t' << traj.at(g, k);
    os << '\n';
  }
}

inline void write_pair_legend(std::ostream& os, const TrajectoryMatrix& traj) {
  os << "column\tleft\tright\n";
  for (std::size_t k = 0; k < traj.columns(); ++k) {
    os << TrajectoryMatrix::column_label(k) << '\t' << traj.condition_ids()[traj.pairs()[k].left] << '\t'
       << traj.condition_ids()[traj.pairs()[k].right] << '\n';
  }
}

/// Gene and condition ids of the matrix biclusters refer to.
struct MatrixLabels {
  std::vector<std::string> gene_ids;
  std::vector<std::string> condition_ids;

  MatrixLabels(std::vector<std::string> genes, std::vector<std::string> conditions)
      : gene_ids(std::move(genes)), condition_ids(std::move(conditions)) {}
  explicit MatrixLabels(const ExpressionMatrix& m) : gene_ids(m.gene_ids()), condition_ids(m.condition_ids()) {}

  MatrixShape shape() const { return {gene_ids.size(), condition_ids.size()}; }
};

namespace detail {

inline std::vector<std::string> names_of(const IndexSet& s, const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  for (auto i : s) out.push_back(ids.at(i));
  return out;
}

inline std::vector<std::string> pair_names(const IndexSet& s) {
  std::vector<std::string> out;
  for (auto k : s) out.push_back(TrajectoryMatrix::column_label(k));
  return out;
}

inline IndexSet indices_of(const std::vector<std::string>& names, const std::vector<std::string>& ids,
                           const std::string& path, std::size_t record, const char* what) {
  std::unordered_map<std::string_view, std::size_t> lookup;
  for (std::size_t i = 0; i < ids.size(); ++i) lookup.emplace(ids[i], i);
  IndexSet out;
  for (const auto& n : names) {
    auto it = lookup.find(n);
    if (it == lookup.end())
      throw ParseError(path, record, 0, std::string("unknown ") + what + " id '" + n + "'");
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline IndexSet pair_indices(const std::vector<std::string>& names, const std::string& path, std::size_t record) {
  IndexSet out;
  for (const auto& n : names) {
    std::size_t k = 0;
    const char* first = n.data() + 1;
    const char* last = n.data() + n.size();
    if (n.size() < 2 || n[0] != 'C' || std::from_chars(first, last, k).ptr != last || k == 0)
      throw ParseError(path, record, 0, "bad pair column label '" + n + "'");
    out.push_back(k - 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string join(const std::vector<std::string>& xs, char sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

inline std::vector<std::string> split_list(std::string_view s, char sep) {
  if (s.empty()) return {};
  auto parts = split_fields(s, sep);
  return parts;
}

inline Bicluster assemble(Algorithm alg, const MatrixLabels& labels, IndexSet genes, IndexSet conditions,
                          std::optional<PairFootprint> pairs) {
  Bicluster b;
  b.algorithm = alg;
  b.shape = labels.shape();
  b.genes = std::move(genes);
  b.conditions = std::move(conditions);
  b.pairs = std::move(pairs);
  return b;
}

}  // namespace detail

/// Serializes biclusters in output order (see sort_for_output). JSON:
/// {"biclusters":[{"algorithm","genes","conditions","pair_mode","pair_columns","scores"}]};
/// TSV: one record per line with comma-joined lists and scores as name=value;...
inline void write_biclusters(std::ostream& os, std::vector<Bicluster> biclusters, const MatrixLabels& labels,
                             OutputFormat fmt) {
  sort_for_output(biclusters, labels.gene_ids, labels.condition_ids);
  if (fmt == OutputFormat::json) {
    nlohmann::ordered_json doc;
    doc["biclusters"] = nlohmann::ordered_json::array();
    for (const auto& b : biclusters) {
      nlohmann::ordered_json rec;
      rec["algorithm"] = std::string(to_string(b.algorithm));
      rec["genes"] = detail::names_of(b.genes, labels.gene_ids);
      rec["conditions"] = detail::names_of(b.conditions, labels.condition_ids);
      if (b.pairs) {
        rec["pair_mode"] = std::string(to_string(b.pairs->mode));
        rec["pair_columns"] = detail::pair_names(b.pairs->columns);
      }
      rec["scores"] = nlohmann::ordered_json::object();
      for (const auto& [k, v] : b.scores) rec["scores"][k] = v;
      doc["biclusters"].push_back(std::move(rec));
    }
    os << doc.dump(2) << '\n';
    return;
  }
  os << "algorithm\tgenes\tconditions\tpair_mode\tpair_columns\tscores\n";
  for (const auto& b : biclusters) {
    std::vector<std::string> scores;
    for (const auto& [k, v] : b.scores) scores.push_back(k + "=" + detail::format_double(v));
    for (const auto& id : detail::names_of(b.genes, labels.gene_ids)) detail::check_writable_id(id, ',');
    for (const auto& id : detail::names_of(b.conditions, labels.condition_ids)) detail::check_writable_id(id, ',');
    os << to_string(b.algorithm) << '\t' << detail::join(detail::names_of(b.genes, labels.gene_ids), ',') << '\t'
       << detail::join(detail::names_of(b.conditions, labels.condition_ids), ',') << '\t'
       << (b.pairs ? std::string(to_string(b.pairs->mode)) : std::string()) << '\t'
       << (b.pairs ? detail::join(detail::pair_names(b.pairs->columns), ',') : std::string()) << '\t'
       << detail::join(scores, ';') << '\n';
  }
}

inline void write_biclusters(const std::vector<Bicluster>& biclusters, const MatrixLabels& labels,
                             const std::string& path, OutputFormat fmt) {
  auto out = detail::open_output(path);
  write_biclusters(out, biclusters, labels, fmt);
  detail::finish_output(out, path);
}

/// Inverse of write_biclusters; ids are resolved against `labels`.
inline std::vector<Bicluster> read_biclusters(std::istream& in, const MatrixLabels& labels, OutputFormat fmt,
                                              const std::string& path = "") {
  std::vector<Bicluster> out;
  if (fmt == OutputFormat::json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
      std::size_t record = 0;
      for (const auto& rec : doc.at("biclusters")) {
        ++record;
        std::optional<PairFootprint> pairs;
        if (rec.contains("pair_columns")) {
          pairs = PairFootprint{parse_pair_mode(rec.at("pair_mode").get<std::string>()),
                                detail::pair_indices(rec.at("pair_columns").get<std::vector<std::string>>(), path, record)};
        }
        auto b = detail::assemble(
            parse_algorithm(rec.at("algorithm").get<std::string>()), labels,
            detail::indices_of(rec.at("genes").get<std::vector<std::string>>(), labels.gene_ids, path, record, "gene"),
            detail::indices_of(rec.at("conditions").get<std::vector<std::string>>(), labels.condition_ids, path,
                               record, "condition"),
            std::move(pairs));
        if (rec.contains("scores")) {
          for (const auto& [k, v] : rec.at("scores").items()) b.scores[k] = v.get<double>();
        }
        out.push_back(std::move(b));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path, 0, 0, std::string("invalid bicluster JSON: ") + e.what());
    }
    return out;
  }
  auto lines = detail::read_table(in, '\t');
  if (lines.empty()) throw ParseError(path, 0, 0, "file is empty");
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto& f = lines[r].fields;
    const std::size_t row = lines[r].number;
    f.resize(std::max<std::size_t>(f.size(), 6));
    std::optional<PairFootprint> pairs;
    if (!f[3].empty()) pairs = PairFootprint{parse_pair_mode(f[3]), detail::pair_indices(detail::split_list(f[4], ','), path, row)};
    auto b = detail::assemble(parse_algorithm(f[0]), labels,
                              detail::indices_of(detail::split_list(f[1], ','), labels.gene_ids, path, row, "gene"),
                              detail::indices_of(detail::split_list(f[2], ','), labels.condition_ids, path, row,
                                                 "condition"),
                              std::move(pairs));
    for (const auto& kv : detail::split_list(f[5], ';')) {
      const auto eq = kv.find('=');
      const auto v = eq == std::string::npos ? std::nullopt : detail::parse_double(std::string_view(kv).substr(eq + 1));
      if (!v) throw ParseError(path, row, 6, "bad score '" + kv + "'");
      b.scores[kv.substr(0, eq)] = *v;
    }
    out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<Bicluster> read_biclusters(const std::string& path, const MatrixLabels& labels, OutputFormat fmt) {
  auto in = detail::open_input(path);
  return read_biclusters(in, labels, fmt, path);
}

}  // namespace biclust
