// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "biclust/biclust.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace biclust;

namespace {

// Pinned limits.
constexpr double kGoldenSeconds = 1.0;
constexpr double kSuiteSeconds = 60.0;
constexpr double kScaleSeconds = 120.0;
constexpr double kExpectedStabilityTolerance = 0.005;
constexpr double kMeasureTolerance = 0.001;
constexpr std::size_t kScaleConceptBudget = 200000;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

oracle::Grid grid_of(const BinaryContext& ctx) {
  oracle::Grid g(ctx.objects(), std::vector<bool>(ctx.attributes()));
  for (std::size_t o = 0; o < ctx.objects(); ++o)
    for (std::size_t a = 0; a < ctx.attributes(); ++a) g[o][a] = ctx.has(o, a);
  return g;
}

Outcome golden_outcome(const std::string& id) {
  Outcome out;
  const auto rep = golden::run_golden(id);
  for (const auto& s : rep.stages) out.require(s.passed, s.name + " [" + s.detail + "]");
  return out;
}

Outcome criterion_biarm() {
  auto out = golden_outcome("biarm");
  const auto ctx = binarize_by_symbol_frequency(trajectory(golden::six_matrix(), PairMode::all_pairs));
  const auto rules = extract_igb(ctx, 0.3, 0.8);
  for (const auto& spec : golden::six_rules()) {
    const auto* r = golden::find_rule(rules, ctx.attributes(), spec);
    out.require(r && r->support == 1.0 / 3.0 && r->confidence == 1.0, "rule support/confidence");
  }
  // supporting genes of 3 => 4 by brute force: objects containing both C3 and C4
  const auto g = grid_of(ctx);
  out.require(oracle::extent(g, 0b1100) == ((1U << 2) | (1U << 5)), "brute-force support of 3 => 4 is not {g3,g6}");
  const auto* r = golden::find_rule(rules, ctx.attributes(), {{3}, {4}});
  out.require(r && oracle::to_mask(supporting_objects(ctx, *r)) == oracle::extent(g, 0b1100), "supporting genes");
  return out;
}

Outcome criterion_nbic() {
  auto out = golden_outcome("nbic-arm");
  const auto sc = binarize_signs(trajectory(golden::nbic_matrix(), PairMode::adjacent));
  std::size_t total = 0;
  for (const auto* ctx : {&sc.positive, &sc.negative}) {
    const auto rules = extract_igb(*ctx, 0.2, 0.9);
    total += rules.size();
    for (const auto& r : rules) out.require(r.support == 0.4 && r.confidence == 1.0, "rule support/confidence");
  }
  out.require(total == 12, std::to_string(total) + " rules instead of 12");
  return out;
}

Outcome criterion_nbf() {
  auto out = golden_outcome("nbf");
  const auto sc = binarize_signs(trajectory(golden::nbf_matrix(), PairMode::all_pairs));
  auto side = [&](const BinaryContext& ctx, const std::vector<golden::StableConceptSpec>& specs) {
    const auto g = grid_of(ctx);
    for (const auto& s : specs) {
      const auto c = golden::to_concept(ctx, s.concept_spec);
      const auto r = stability(ctx, c);
      const auto brute = oracle::stable_subsets(g, ctx.attributes(), oracle::to_mask(c.extent), oracle::to_mask(c.intent));
      out.require(std::abs(r.value - s.expected_stability) <= kExpectedStabilityTolerance, "expected stability");
      out.require(r.subset_count && *r.subset_count == brute, "stability differs from brute force");
      out.require(r.value == std::ldexp(static_cast<double>(brute), -static_cast<int>(c.extent.count())),
                  "stability ratio");
    }
  };
  side(sc.positive, golden::nbf_positive_concepts());
  side(sc.negative, golden::nbf_negative_concepts());
  return out;
}

Outcome criterion_measures() {
  Outcome out;
  const auto ctx = golden::measures_context();
  out.require(bond(ctx, to_bitset(8, {0, 1})) == 0.125, "bond({a,b}) != 0.125");
  const FormalConcept c{to_bitset(9, {2, 3, 4, 5, 6, 8}), to_bitset(8, {5, 6})};
  const auto r = stability(ctx, c);
  const auto brute = oracle::stable_subsets(grid_of(ctx), 8, oracle::to_mask(c.extent), oracle::to_mask(c.intent));
  out.require(std::abs(r.value - 0.593) <= kMeasureTolerance, "stability not within 0.001 of 0.593");
  out.require(r.value == static_cast<double>(brute) / 64.0, "stability differs from brute force over 64 subsets");
  std::ostringstream os;
  os << "bond 0.125, stability " << brute << "/64";
  out.detail = out.ok ? os.str() : out.detail;
  return out;
}

Outcome criterion_oracles() {
  Outcome out;
  std::mt19937_64 rng(20240601);
  std::size_t concept_mismatch = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 10;
    const std::size_t m = 1 + rng() % 12;
    const auto g = oracle::random_grid(rng, n, m, 0.15 + 0.7 * static_cast<double>(rng() % 100) / 100.0);
    EnumerationOptions opt;
    opt.jobs = 1 + static_cast<unsigned>(t % 4);
    if (oracle::keys_of(enumerate_concepts(oracle::to_context(g, m), opt)) != oracle::concepts(g, m, 1, 1))
      ++concept_mismatch;
  }
  std::size_t rule_mismatch = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t m = 1 + rng() % 10;
    const auto g = oracle::random_grid(rng, n, m, 0.2 + 0.6 * static_cast<double>(rng() % 100) / 100.0);
    const double minsupp = 0.05 + 0.5 * static_cast<double>(rng() % 100) / 100.0;
    const double minconf = 0.3 + 0.65 * static_cast<double>(rng() % 100) / 100.0;
    if (oracle::keys_of(extract_igb(oracle::to_context(g, m), minsupp, minconf)) != oracle::igb(g, m, minsupp, minconf))
      ++rule_mismatch;
  }
  std::size_t stab_checked = 0;
  std::size_t stab_mismatch = 0;
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 15;
    const std::size_t m = 1 + rng() % 10;
    const auto g = oracle::random_grid(rng, n, m, 0.3 + 0.5 * static_cast<double>(rng() % 100) / 100.0);
    const auto ctx = oracle::to_context(g, m);
    for (const auto& c : enumerate_concepts(ctx)) {
      const auto r = stability(ctx, c);
      const auto brute = oracle::stable_subsets(g, m, oracle::to_mask(c.extent), oracle::to_mask(c.intent));
      ++stab_checked;
      if (r.estimated() || !r.subset_count || *r.subset_count != brute) ++stab_mismatch;
    }
  }
  out.require(concept_mismatch == 0, std::to_string(concept_mismatch) + " concept mismatches");
  out.require(rule_mismatch == 0, std::to_string(rule_mismatch) + " rule mismatches");
  out.require(stab_mismatch == 0, std::to_string(stab_mismatch) + " stability mismatches");
  if (out.ok)
    out.detail = "200 contexts, 100 rule bases, " + std::to_string(stab_checked) + " stabilities; 0 mismatches";
  return out;
}

std::string json_of(const std::vector<Bicluster>& bs, const ExpressionMatrix& m) {
  std::ostringstream os;
  write_biclusters(os, bs, MatrixLabels(m), OutputFormat::json);
  return os.str();
}

Outcome criterion_properties() {
  Outcome out;
  std::mt19937_64 rng(777);
  std::size_t galois = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 10;
    const std::size_t m = 1 + rng() % 10;
    const auto ctx = oracle::to_context(oracle::random_grid(rng, n, m, 0.5), m);
    Bitset a(m);
    Bitset b(m);
    Bitset o(n);
    for (std::size_t j = 0; j < m; ++j) {
      if (rng() % 2) a.set(j);
      if (rng() % 2) b.set(j);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (rng() % 2) o.set(i);
    b |= a;
    const auto ca = close_itemset(ctx, a);
    const bool ok = o.is_subset_of(extent_of(ctx, a)) == a.is_subset_of(intent_of(ctx, o)) && a.is_subset_of(ca) &&
                    ca.is_subset_of(close_itemset(ctx, b)) && close_itemset(ctx, ca) == ca;
    if (!ok) ++galois;
  }
  out.require(galois == 0, "Galois or closure axiom violated");

  std::size_t bond_violations = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = 2 + rng() % 10;
    const auto ctx = oracle::to_context(oracle::random_grid(rng, 1 + rng() % 12, m, 0.5), m);
    Bitset a(m);
    a.set(rng() % m);
    double last = bond(ctx, a);
    for (std::size_t s = 0; s < m; ++s) {
      a.set(rng() % m);
      const double now = bond(ctx, a);
      if (now > last) ++bond_violations;
      last = now;
    }
  }
  out.require(bond_violations == 0, "bond increased under attribute addition");

  std::size_t coverage_violations = 0;
  for (int t = 0; t < 20; ++t) {
    const auto m = oracle::random_matrix(rng, 10, 6);
    std::vector<Bicluster> bs;
    double last = 0.0;
    for (int k = 0; k < 20; ++k) {
      Bicluster b;
      b.shape = {10, 6};
      for (std::size_t g = 0; g < 10; ++g)
        if (rng() % 3 == 0) b.genes.push_back(g);
      for (std::size_t c = 0; c < 6; ++c)
        if (rng() % 2) b.conditions.push_back(c);
      bs.push_back(b);
      const double now = coverage(m, bs).total_coverage;
      if (now < last) ++coverage_violations;
      last = now;
    }
  }
  out.require(coverage_violations == 0, "coverage decreased when adding a bicluster");

  std::size_t jobs_mismatch = 0;
  std::size_t partition_violations = 0;
  std::size_t partition_checked = 0;
  for (int t = 0; t < 8; ++t) {
    const auto m = t % 2 ? oracle::random_matrix(rng, 30, 6) : oracle::planted_matrix(rng, 30, 6);
    PipelineConfig cfg;
    cfg.minsupp = 0.1;
    cfg.minconf = 0.7;
    cfg.minjaccard = 0.5;
    cfg.minbond = 0.5;
    cfg.mincondition = 2;
    cfg.minstability = 0.3;
    cfg.alpha1 = 0.6;
    cfg.alpha2 = 0.6;
    for (auto alg : {Algorithm::biarm, Algorithm::bifca_plus, Algorithm::bifca, Algorithm::nbic_arm, Algorithm::nbf}) {
      auto four = cfg;
      four.jobs = 4;
      const auto one_out = run_pipeline(alg, m, cfg);
      if (json_of(one_out, m) != json_of(run_pipeline(alg, m, four), m)) ++jobs_mismatch;
      if (alg == Algorithm::nbic_arm || alg == Algorithm::nbf) {
        const auto traj = trajectory(m, default_mode(alg));
        for (const auto& b : one_out) {
          ++partition_checked;
          if (!oracle::sign_partition(traj, b)) ++partition_violations;
        }
      }
    }
  }
  out.require(jobs_mismatch == 0, "output differs between 1 and 4 jobs");
  out.require(partition_violations == 0, std::to_string(partition_violations) + " sign-partition violations");
  if (out.ok) out.detail = std::to_string(partition_checked) + " negative-correlation biclusters checked";
  return out;
}

ExpressionMatrix yeast_shaped(std::mt19937_64& rng) {
  const std::size_t genes = 2884;
  const std::size_t conditions = 17;
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> rows(genes, std::vector<double>(conditions));
  std::vector<std::vector<double>> profiles(12, std::vector<double>(conditions));
  for (auto& p : profiles)
    for (auto& x : p) x = 3.0 * noise(rng);
  for (std::size_t g = 0; g < genes; ++g) {
    const auto& p = profiles[g % profiles.size()];
    const bool planted = g % 3 != 0;
    for (std::size_t c = 0; c < conditions; ++c) rows[g][c] = (planted ? p[c] : 0.0) + 0.5 * noise(rng);
  }
  return ExpressionMatrix(golden::labels("YG", genes), golden::labels("c", conditions), rows);
}

Outcome criterion_scale() {
  Outcome out;
  std::mt19937_64 rng(2884);
  const auto m = yeast_shaped(rng);
  PipelineConfig cfg;
  cfg.minbond = 0.5;
  cfg.min_extent = 10;
  cfg.max_concepts = kScaleConceptBudget;
  cfg.jobs = 4;
  const auto result = run_bifca_plus(m, cfg);
  out.require(!result.empty(), "no biclusters");
  test_util::TempDir dir;
  const auto cov_path = dir.file("coverage.tsv");
  {
    std::ofstream os(cov_path);
    write_coverage(os, coverage(m, result));
  }
  const auto cov = coverage(m, result);
  out.require(cov.total_coverage > 0.0 && cov.total_coverage <= 1.0, "coverage out of range");
  out.require(test_util::slurp(cov_path).rfind("metric\tvalue\n", 0) == 0, "coverage file malformed");
  std::size_t profile_rows = 0;
  if (!result.empty()) {
    const auto path = dir.file("bicluster_1.tsv");
    export_profile(m, result.front(), path);
    const auto reread = load_expression_matrix(path);
    profile_rows = reread.genes();
    out.require(reread.genes() == result.front().genes.size() &&
                    reread.conditions() == result.front().conditions.size(),
                "profile shape");
    for (std::size_t i = 0; i < reread.genes() && out.ok; ++i)
      for (std::size_t j = 0; j < reread.conditions(); ++j)
        if (reread.at(i, j) != m.at(result.front().genes[i], result.front().conditions[j])) {
          out.require(false, "profile values differ from the matrix");
          break;
        }
  }
  if (out.ok) {
    std::ostringstream os;
    os << result.size() << " biclusters, coverage " << cov.total_coverage << ", profile rows " << profile_rows;
    out.detail = os.str();
  }
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "golden replay: BiARM chain", kGoldenSeconds, criterion_biarm},
      {2, "golden replay: BiFCA+ chain", kGoldenSeconds, [] { return golden_outcome("bifca-plus"); }},
      {3, "golden replay: BiFCA chain", kGoldenSeconds, [] { return golden_outcome("bifca"); }},
      {4, "golden replay: NBic-ARM", kGoldenSeconds, criterion_nbic},
      {5, "golden replay: NBF", kGoldenSeconds, criterion_nbf},
      {6, "measure values: bond and stability", kGoldenSeconds, criterion_measures},
      {7, "oracle equivalence suites", kSuiteSeconds, criterion_oracles},
      {8, "property suites", kSuiteSeconds, criterion_properties},
      {9, "scale smoke test: BiFCA+ on 2884 x 17", kScaleSeconds, criterion_scale},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.limit) {
      o.ok = false;
      o.detail += (o.detail.empty() ? "" : "; ") + std::string("too slow");
    }
    if (!o.ok) ++failed;
    std::printf("%s  criterion %d  %-40s %8.3fs (limit %gs)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, c.limit,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
