// Command-line front end: biclust <subcommand> [flags]
//
// Exit codes: 0 success, 1 usage error, 2 data error (or a failed golden replay).

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "biclust/biclust.hpp"

namespace fs = std::filesystem;
using namespace biclust;

namespace {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

Level log_level() {
  const char* env = std::getenv("BICLUST_LOG");
  if (!env) return Level::warn;
  const std::string v = env;
  if (v == "error") return Level::error;
  if (v == "info") return Level::info;
  if (v == "debug") return Level::debug;
  return Level::warn;
}

void log(Level level, const std::string& msg) {
  static const Level threshold = log_level();
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= threshold) std::cerr << "biclust: " << names[static_cast<int>(level)] << ": " << msg << '\n';
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Accepts "0.25" or "25%".
double parse_ratio(const std::string& flag, const std::string& text) {
  std::string body = text;
  double scale = 1.0;
  if (!body.empty() && body.back() == '%') {
    body.pop_back();
    scale = 0.01;
  }
  const auto v = biclust::detail::parse_double(body);
  if (!v || !std::isfinite(*v)) throw UsageError("invalid value '" + text + "' for --" + flag);
  return *v * scale;
}

struct Options {
  std::string input;
  std::string output = ".";
  std::string format = "json";
  std::string input_format;
  std::string mode;
  std::map<std::string, std::string> ratios;  // flag -> raw text
  std::optional<std::size_t> mincondition;
  std::optional<std::size_t> min_extent;
  std::optional<std::size_t> min_intent;
  unsigned jobs = 1;
  std::size_t max_concepts = 0;
  double epsilon = 0.0;
  bool fixpoint = false;
  bool dump = false;
  bool profiles = false;
  bool gene_lists = false;
  std::string biclusters;
  bool with_stability = false;
  std::string example;
};

std::vector<std::string> required_flags(Algorithm a) {
  switch (a) {
    case Algorithm::biarm: return {"minsupp", "minconf", "minjaccard"};
    case Algorithm::bifca_plus: return {"minbond"};
    case Algorithm::bifca: return {"minbond", "mincondition"};
    case Algorithm::nbic_arm: return {"minsupp", "minconf", "alpha1", "alpha2"};
    case Algorithm::nbf: return {"minstability", "alpha1", "alpha2"};
  }
  return {};
}

std::optional<double> ratio(const Options& o, const std::string& flag) {
  auto it = o.ratios.find(flag);
  if (it == o.ratios.end()) return std::nullopt;
  const double v = parse_ratio(flag, it->second);
  const bool zero_ok = flag == "minstability";
  if (v > 1.0 || v < 0.0 || (!zero_ok && v == 0.0))
    throw UsageError("--" + flag + " must lie in " + (zero_ok ? "[0, 1]" : "(0, 1]") + ", got '" + it->second + "'");
  return v;
}

PipelineConfig make_config(const Options& o, Algorithm alg) {
  for (const auto& flag : required_flags(alg)) {
    const bool present = flag == "mincondition" ? o.mincondition.has_value() : o.ratios.count(flag) > 0;
    if (!present) throw UsageError("missing required flag --" + flag);
  }
  PipelineConfig cfg;
  cfg.minsupp = ratio(o, "minsupp");
  cfg.minconf = ratio(o, "minconf");
  cfg.minjaccard = ratio(o, "minjaccard");
  cfg.minbond = ratio(o, "minbond");
  cfg.alpha1 = ratio(o, "alpha1");
  cfg.alpha2 = ratio(o, "alpha2");
  cfg.minstability = ratio(o, "minstability");
  auto count = [](const std::optional<std::size_t>& v, const char* flag) {
    if (v && *v < 1) throw UsageError(std::string("--") + flag + " must be >= 1");
    return v;
  };
  cfg.mincondition = count(o.mincondition, "mincondition");
  cfg.min_extent = count(o.min_extent, "min-extent");
  cfg.min_intent = count(o.min_intent, "min-intent");
  if (!o.mode.empty()) {
    try {
      cfg.mode = parse_pair_mode(o.mode);
    } catch (const Error&) {
      throw UsageError("invalid value '" + o.mode + "' for --mode");
    }
  }
  if (o.jobs < 1) throw UsageError("--jobs must be >= 1");
  if (o.epsilon < 0.0) throw UsageError("--epsilon must be >= 0");
  cfg.jobs = o.jobs;
  cfg.max_concepts = o.max_concepts;
  cfg.epsilon = o.epsilon;
  cfg.fixpoint = o.fixpoint;
  return cfg;
}

std::string describe(const PipelineConfig& cfg) {
  std::ostringstream os;
  auto put = [&](const char* name, const std::optional<double>& v) {
    if (v) os << ' ' << name << '=' << biclust::detail::format_double(*v);
  };
  put("minsupp", cfg.minsupp);
  put("minconf", cfg.minconf);
  put("minjaccard", cfg.minjaccard);
  put("minbond", cfg.minbond);
  put("alpha1", cfg.alpha1);
  put("alpha2", cfg.alpha2);
  put("minstability", cfg.minstability);
  if (cfg.mincondition) os << " mincondition=" << *cfg.mincondition;
  os << " jobs=" << cfg.jobs;
  return os.str();
}

TableFormat input_format(const Options& o) {
  if (o.input_format.empty()) return table_format_for(o.input);
  try {
    return parse_table_format(o.input_format);
  } catch (const Error&) {
    throw UsageError("invalid value '" + o.input_format + "' for --input-format");
  }
}

OutputFormat output_format(const Options& o) {
  try {
    return parse_output_format(o.format);
  } catch (const Error&) {
    throw UsageError("invalid value '" + o.format + "' for --format");
  }
}

template <class Fn>
void write_file(const fs::path& path, Fn fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_concepts(std::ostream& os, const BinaryContext& ctx, const std::vector<FormalConcept>& concepts,
                    const std::vector<StabilityResult>* stab = nullptr) {
  auto names = [](const Bitset& s, const std::vector<std::string>& ids) {
    std::string out;
    for (auto i = s.find_first(); i != Bitset::npos; i = s.find_next(i)) out += (out.empty() ? "" : ",") + ids[i];
    return out;
  };
  os << "extent\tintent" << (stab ? "\tstability" : "") << '\n';
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    os << names(concepts[i].extent, ctx.object_ids()) << '\t' << names(concepts[i].intent, ctx.attribute_ids());
    if (stab) os << '\t' << biclust::detail::format_double((*stab)[i].value);
    os << '\n';
  }
}

void dump_trace(const fs::path& dir, const PipelineTrace& t, const MatrixLabels& labels) {
  fs::create_directories(dir);
  if (t.trajectory) {
    write_file(dir / "trajectory.tsv", [&](std::ostream& os) { write_trajectory(os, *t.trajectory); });
    write_file(dir / "pair_columns.tsv", [&](std::ostream& os) { write_pair_legend(os, *t.trajectory); });
  }
  auto ctx_dump = [&](const std::optional<BinaryContext>& ctx, const std::string& name,
                      const std::vector<FormalConcept>& concepts, const std::vector<StabilityResult>& stab,
                      const std::vector<GenericRule>& rules) {
    if (!ctx) return;
    write_file(dir / (name + ".tsv"), [&](std::ostream& os) { write_binary_context(os, *ctx); });
    if (!concepts.empty())
      write_file(dir / (name + "_concepts.tsv"),
                 [&](std::ostream& os) { write_concepts(os, *ctx, concepts, stab.empty() ? nullptr : &stab); });
    if (!rules.empty())
      write_file(dir / (name + "_rules.tsv"), [&](std::ostream& os) { write_rules_tsv(os, *ctx, rules); });
  };
  ctx_dump(t.context, "context", t.concepts, {}, t.rules);
  ctx_dump(t.positive, "positive", t.positive_concepts, t.positive_stability, t.positive_rules);
  ctx_dump(t.negative, "negative", t.negative_concepts, t.negative_stability, t.negative_rules);
  auto bic_dump = [&](const std::vector<Bicluster>& bs, const std::string& name) {
    if (!bs.empty())
      write_file(dir / (name + ".json"), [&](std::ostream& os) { write_biclusters(os, bs, labels, OutputFormat::json); });
  };
  bic_dump(t.candidates, "candidates");
  bic_dump(t.positive_candidates, "positive_candidates");
  bic_dump(t.negative_candidates, "negative_candidates");
  bic_dump(t.phase4, "phase4");
}

int run_algorithm(Algorithm alg, const Options& o) {
  const auto cfg = make_config(o, alg);
  const auto fmt = output_format(o);
  const auto matrix = load_expression_matrix(o.input, input_format(o));
  log(Level::info, std::string(to_string(alg)) + " on " + o.input + " (" + std::to_string(matrix.genes()) + " x " +
                       std::to_string(matrix.conditions()) + ")" + describe(cfg));
  PipelineTrace trace;
  const auto result = run_pipeline(alg, matrix, cfg, o.dump ? &trace : nullptr);
  log(Level::info, std::to_string(result.size()) + " biclusters");

  const fs::path out = o.output;
  fs::create_directories(out);
  const MatrixLabels labels(matrix);
  write_biclusters(result, labels, (out / (fmt == OutputFormat::json ? "biclusters.json" : "biclusters.tsv")).string(),
                   fmt);
  write_file(out / "coverage.tsv", [&](std::ostream& os) { write_coverage(os, coverage(matrix, result)); });

  auto sorted = result;
  sort_for_output(sorted, matrix.gene_ids(), matrix.condition_ids());
  if (o.profiles || o.gene_lists) {
    if (o.profiles) fs::create_directories(out / "profiles");
    if (o.gene_lists) fs::create_directories(out / "genes");
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const std::string stem = "bicluster_" + std::to_string(i + 1);
      if (o.profiles) export_profile(matrix, sorted[i], (out / "profiles" / (stem + ".tsv")).string());
      if (o.gene_lists) export_gene_list(matrix, sorted[i], (out / "genes" / (stem + ".txt")).string());
    }
  }
  if (o.dump) dump_trace(out / "intermediates", trace, labels);
  return 0;
}

int run_coverage(const Options& o) {
  const auto matrix = load_expression_matrix(o.input, input_format(o));
  const MatrixLabels labels(matrix);
  const auto bs = read_biclusters(o.biclusters, labels,
                                  o.biclusters.size() > 4 && o.biclusters.substr(o.biclusters.size() - 4) == ".tsv"
                                      ? OutputFormat::tsv
                                      : OutputFormat::json);
  write_coverage(std::cout, coverage(matrix, bs));
  return 0;
}

EnumerationOptions enumeration(const Options& o) {
  EnumerationOptions opt;
  if (o.min_extent && *o.min_extent < 1) throw UsageError("--min-extent must be >= 1");
  if (o.min_intent && *o.min_intent < 1) throw UsageError("--min-intent must be >= 1");
  if (o.jobs < 1) throw UsageError("--jobs must be >= 1");
  opt.min_extent = o.min_extent.value_or(1);
  opt.min_intent = o.min_intent.value_or(1);
  opt.max_concepts = o.max_concepts;
  opt.jobs = o.jobs;
  return opt;
}

int run_concepts(const Options& o) {
  const auto opt = enumeration(o);
  const BinaryContext ctx(load_binary_context(o.input, input_format(o)));
  const auto concepts = enumerate_concepts(ctx, opt);
  std::vector<StabilityResult> stab;
  if (o.with_stability)
    for (const auto& c : concepts) stab.push_back(stability(ctx, c));
  write_concepts(std::cout, ctx, concepts, o.with_stability ? &stab : nullptr);
  return 0;
}

int run_rules(const Options& o) {
  for (const char* flag : {"minsupp", "minconf"})
    if (!o.ratios.count(flag)) throw UsageError(std::string("missing required flag --") + flag);
  const double minsupp = *ratio(o, "minsupp");
  const double minconf = *ratio(o, "minconf");
  if (o.jobs < 1) throw UsageError("--jobs must be >= 1");
  const BinaryContext ctx(load_binary_context(o.input, input_format(o)));
  write_rules_tsv(std::cout, ctx, extract_igb(ctx, minsupp, minconf, o.jobs));
  return 0;
}

int run_golden_cmd(const Options& o) {
  const auto& ids = golden::example_ids();
  if (std::find(ids.begin(), ids.end(), o.example) == ids.end()) {
    std::string known;
    for (const auto& id : ids) known += " " + id;
    throw UsageError("unknown example '" + o.example + "' (known:" + known + ")");
  }
  const auto report = golden::run_golden(o.example);
  for (const auto& s : report.stages)
    std::cout << (s.passed ? "PASS" : "FAIL") << "  " << s.name << (s.detail.empty() ? "" : "  [" + s.detail + "]")
              << '\n';
  std::cout << report.id << ": " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : 2;
}

void add_io(CLI::App* sub, Options& o, bool output) {
  sub->add_option("--input,-i", o.input, "Input file (tsv or csv)")->required();
  sub->add_option("--input-format", o.input_format, "Input table format: tsv or csv (default: from extension)");
  if (output) {
    sub->add_option("--output,-o", o.output, "Output directory")->capture_default_str();
    sub->add_option("--format", o.format, "Bicluster file format: json or tsv")->capture_default_str();
  }
}

void add_ratio(CLI::App* sub, Options& o, const std::string& flag, const std::string& help) {
  sub->add_option_function<std::string>("--" + flag, [&o, flag](const std::string& v) { o.ratios[flag] = v; },
                                        help + " (decimal or percentage)");
}

void add_mining(CLI::App* sub, Options& o) {
  sub->add_option("--min-extent", o.min_extent, "Minimum genes per concept");
  sub->add_option("--min-intent", o.min_intent, "Minimum columns per concept");
  sub->add_option("--jobs,-j", o.jobs, "Mining threads")->capture_default_str();
  sub->add_option("--max-concepts", o.max_concepts, "Abort when more concepts are found (0 = unlimited)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biclustering of gene expression matrices by closed pattern mining"};
  app.require_subcommand(1);
  Options o;

  struct AlgSpec {
    const char* name;
    Algorithm alg;
    const char* help;
  };
  const AlgSpec algs[] = {
      {"biarm", Algorithm::biarm, "Association-rule biclusters over all condition pairs"},
      {"bifca-plus", Algorithm::bifca_plus, "Concept biclusters over adjacent condition pairs"},
      {"bifca", Algorithm::bifca, "Concept biclusters over all condition pairs"},
      {"nbic-arm", Algorithm::nbic_arm, "Negatively correlated biclusters from up/down rules"},
      {"nbf", Algorithm::nbf, "Negatively correlated biclusters from stable up/down concepts"},
  };
  std::map<CLI::App*, Algorithm> alg_of;
  for (const auto& a : algs) {
    auto* sub = app.add_subcommand(a.name, a.help);
    alg_of[sub] = a.alg;
    add_io(sub, o, true);
    sub->add_option("--mode", o.mode, "Condition pairing: adjacent or all-pairs");
    add_ratio(sub, o, "minsupp", "Minimum rule support");
    add_ratio(sub, o, "minconf", "Minimum rule confidence");
    add_ratio(sub, o, "minjaccard", "Maximum cell overlap between kept biclusters");
    add_ratio(sub, o, "minbond", "Maximum column overlap between kept biclusters");
    add_ratio(sub, o, "alpha1", "Minimum condition-intersection proportion");
    add_ratio(sub, o, "alpha2", "Minimum gene-intersection proportion");
    add_ratio(sub, o, "minstability", "Stability a concept must exceed");
    sub->add_option("--mincondition", o.mincondition, "Minimum number of pair columns");
    add_mining(sub, o);
    sub->add_option("--epsilon", o.epsilon, "Changes up to this size count as unchanged")->capture_default_str();
    sub->add_flag("--fixpoint", o.fixpoint, "Repeat merging until nothing changes");
    sub->add_flag("--dump-intermediates", o.dump, "Write trajectory, contexts, concepts and rules");
    sub->add_flag("--profiles", o.profiles, "Write one expression profile per bicluster");
    sub->add_flag("--gene-lists", o.gene_lists, "Write one gene list per bicluster");
  }

  auto* cov = app.add_subcommand("coverage", "Coverage of a bicluster file over a matrix");
  add_io(cov, o, false);
  cov->add_option("--biclusters,-b", o.biclusters, "Bicluster file (json or tsv)")->required();

  auto* con = app.add_subcommand("concepts", "Formal concepts of a 0/1 context");
  add_io(con, o, false);
  add_mining(con, o);
  con->add_flag("--stability", o.with_stability, "Add a stability column");

  auto* rul = app.add_subcommand("rules", "Generic association rules of a 0/1 context");
  add_io(rul, o, false);
  add_ratio(rul, o, "minsupp", "Minimum rule support");
  add_ratio(rul, o, "minconf", "Minimum rule confidence");
  rul->add_option("--jobs,-j", o.jobs, "Mining threads")->capture_default_str();

  auto* gold = app.add_subcommand("golden", "Replay a built-in worked example");
  gold->add_option("example", o.example, "biarm, bifca-plus, bifca, nbic-arm or nbf")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (auto& [sub, alg] : alg_of)
      if (sub->parsed()) return run_algorithm(alg, o);
    if (cov->parsed()) return run_coverage(o);
    if (con->parsed()) return run_concepts(o);
    if (rul->parsed()) return run_rules(o);
    if (gold->parsed()) return run_golden_cmd(o);
  } catch (const UsageError& e) {
    std::cerr << "biclust: usage error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "biclust: usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "biclust: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "biclust: error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
