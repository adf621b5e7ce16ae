// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "pipeline.hpp"
#include "scholimetric/benchmarks.hpp"
#include "scholimetric/evaluation.hpp"
#include "scholimetric/io.hpp"
#include "scholimetric/metrics.hpp"
#include "scholimetric/select.hpp"
#include "scholimetric/synth.hpp"

using namespace scholimetric;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

const fs::path kFixtures = SCHOLIMETRIC_FIXTURE_DIR;
const Window kDeskWindow = Window::make(2005, 2010, 2011);

// 1 and 2 share their corpora: 500 random corpora, each with a random subset.
struct OracleRun {
  std::size_t mismatches = 0;
  std::size_t order_violations = 0;
  std::size_t checks = 0;
  double seconds = 0;
};

const OracleRun& oracle_run() {
  static const OracleRun run = [] {
    OracleRun r;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20120501);
    for (int trial = 0; trial < 500; ++trial) {
      const Corpus c = oracle::random_recipe(rng, 200, 2000).build();
      const MetricOptions o = trial % 4 == 0 ? MetricOptions{} : oracle::random_options(rng);
      const CitationIndex index(c, o);
      const auto brute = oracle::all_counts(c, o);
      const PublicationSet s = oracle::random_subset(rng, c);

      const std::uint32_t h = index.hirsch_of_set(s).value;
      const std::uint32_t h2 = index.indirect_h2(s).value;
      r.mismatches += h != oracle::hirsch_of_set(c, s, o) ? 1 : 0;
      r.mismatches += h2 != oracle::h2(c, s, o, brute) ? 1 : 0;
      r.checks += 2;
      for (std::uint32_t i = 0; i < c.size(); ++i) {
        const std::uint32_t single = index.single_publication_h(PubIndex{i});
        r.mismatches += single != oracle::single_h(c, PubIndex{i}, o, brute) ? 1 : 0;
        r.order_violations += single > index.count(PubIndex{i}) ? 1 : 0;
        ++r.checks;
      }
      r.order_violations += (h2 <= h && h <= s.size()) ? 0 : 1;
      const auto whole = c.all();
      const std::uint32_t wh = index.hirsch_of_set(whole).value;
      r.order_violations += (index.indirect_h2(whole).value <= wh && wh <= whole.size()) ? 0 : 1;
    }
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

Outcome criterion_1() {
  const OracleRun& r = oracle_run();
  return {r.mismatches == 0 && r.seconds < 60.0,
          fmt::format("{} mismatches in {} comparisons over 500 corpora, {:.1f} s", r.mismatches, r.checks, r.seconds)};
}

Outcome criterion_2() {
  const OracleRun& r = oracle_run();
  return {r.order_violations == 0, fmt::format("{} violations of H2 <= h <= |S|", r.order_violations)};
}

Outcome criterion_3() {
  std::mt19937_64 rng(31337);
  std::size_t perturbations = 0, violations = 0;
  while (perturbations < 1000) {
    oracle::Recipe recipe = oracle::random_recipe(rng, 80, 600);
    const MetricOptions o = oracle::random_options(rng);
    std::set<std::string> members;
    for (const auto& p : recipe.pubs) {
      if (rng() % 3 == 0) members.insert(p.id);
    }
    const auto measure = [&](const Corpus& c) {
      std::vector<PubIndex> v;
      for (const auto& id : members) v.push_back(c.index_of(id));
      const PublicationSet s(std::move(v));
      const CitationIndex index(c, o);
      return std::pair{index.hirsch_of_set(s).value, index.indirect_h2(s).value};
    };
    std::set<std::pair<std::string, std::string>> edges(recipe.edges.begin(), recipe.edges.end());
    auto before = measure(recipe.build());
    for (int step = 0; step < 20 && perturbations < 1000; ++step, ++perturbations) {
      if (rng() % 2 == 0) {
        // new publication citing a few existing ones; sometimes joins the set
        const std::size_t n = recipe.pubs.size();
        recipe.pubs.push_back(oracle::random_pub(rng, n));
        const auto refs = rng() % 6;
        for (std::uint64_t k = 0; k < refs; ++k) {
          const auto target = oracle::pub_id(rng() % n);
          if (edges.emplace(recipe.pubs.back().id, target).second) recipe.edges.emplace_back(recipe.pubs.back().id, target);
        }
        if (rng() % 3 == 0) members.insert(recipe.pubs.back().id);
      } else {
        const std::size_t n = recipe.pubs.size();
        const auto from = oracle::pub_id(rng() % n);
        const auto to = oracle::pub_id(rng() % n);
        if (from != to && edges.emplace(from, to).second) recipe.edges.emplace_back(from, to);
      }
      const auto after = measure(recipe.build());
      violations += (after.first < before.first || after.second < before.second) ? 1 : 0;
      before = after;
    }
  }
  return {violations == 0, fmt::format("{} decreases over {} perturbations", violations, perturbations)};
}

struct DeskGame {
  GamingReport report;
  double ratio = 0;
};

Outcome criterion_4() {
  const Corpus c = ingest(snapshot_sources(kFixtures / "forestry-desk"));
  const CitationIndex index(c, {});
  const BenchmarkTable table = build_benchmark(index, FieldCode("0705"), kDeskWindow);
  const GamingSpec spec{"scu", FieldCode("0705"), kDeskWindow, {"forestry", "silviculture", "timber", "eucalyptus"}, 50};
  const GamingReport g = run_gaming_experiment(index, spec, table);
  const double ratio = g.selective.mean_rci / g.strict.mean_rci;

  // Values hand-verified with the independent evaluator in tools/fixtures.
  const bool frozen = g.strict.total_articles == 66 && g.all_inclusive.total_articles == 107 &&
                      g.selective.total_articles == 50 &&
                      std::abs(g.strict.mean_rci - 1.116839960756818) < 1e-12 &&
                      std::abs(g.all_inclusive.mean_rci - 1.2690933731909804) < 1e-12 &&
                      std::abs(g.selective.mean_rci - 2.332124756335283) < 1e-12 && g.strict.h.value == 10 &&
                      g.all_inclusive.h.value == 14 && g.selective.h.value == 14;
  const bool h2_same = g.strict.h2.value == 6 && g.all_inclusive.h2.value == 6 && g.selective.h2.value == 6;
  return {ratio >= 1.9 && h2_same && frozen && g.core_survived,
          fmt::format("mean RCI {:.2f} -> {:.2f} (x{:.3f}), H2 {} / {} / {}, golden values {}", g.strict.mean_rci,
                      g.selective.mean_rci, ratio, g.all_inclusive.h2.value, g.strict.h2.value, g.selective.h2.value,
                      frozen ? "match" : "differ")};
}

// Exact rational arithmetic for criterion 5.
struct Fraction {
  __int128 num = 0;
  __int128 den = 1;
  Fraction operator+(const Fraction& o) const {
    Fraction r{num * o.den + o.num * den, den * o.den};
    const __int128 g = std::gcd(static_cast<long long>(r.num), static_cast<long long>(r.den));
    if (g > 1) {
      r.num /= g;
      r.den /= g;
    }
    return r;
  }
  bool operator==(const Fraction& o) const { return num * o.den == o.num * den; }
  bool operator<(const Fraction& o) const { return num * o.den < o.num * den; }
};

Outcome criterion_5() {
  std::mt19937_64 rng(5555);
  std::size_t pools = 0, mismatches = 0;
  for (int trial = 0; trial < 300; ++trial) {
    // one field, three publication years, random citation counts
    CorpusBuilder b;
    b.add_journal("0705-0011", "Field Journal", {FieldCode("0705")});
    std::vector<std::string> field_ids;
    std::map<int, std::uint64_t> totals, sizes;
    std::map<std::string, std::pair<int, std::uint64_t>> facts;  // year, citations
    int citer = 0;
    for (int year = 2005; year <= 2007; ++year) {
      const int n_year = 4 + static_cast<int>(rng() % 8);
      for (int k = 0; k < n_year; ++k) {
        const std::string id = fmt::format("f{}-{}", year, k);
        b.add_publication({id, year, "0705-0011", {}, {}});
        const auto cites = (k == 0 ? 1 : 0) + rng() % (rng() % 2 == 0 ? 4 : 16);
        for (std::uint64_t j = 0; j < cites; ++j) {
          const std::string from = fmt::format("c{}", citer++);
          b.add_publication({from, 2011, std::nullopt, {}, {}});
          b.add_citation(from, id);
        }
        field_ids.push_back(id);
        totals[year] += cites;
        sizes[year] += 1;
        facts[id] = {year, cites};
      }
    }
    const Corpus c = std::move(b).build();
    const CitationIndex index(c, {});
    const Window w = Window::make(2005, 2007, 2011);
    const BenchmarkTable table = build_benchmark(index, FieldCode("0705"), w);

    std::shuffle(field_ids.begin(), field_ids.end(), rng);
    const std::size_t n = 1 + rng() % std::min<std::size_t>(12, field_ids.size());
    const std::size_t k = 1 + rng() % std::min<std::size_t>(6, n);
    std::vector<std::string> pool_ids(field_ids.begin(), field_ids.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<PubIndex> pool_members;
    for (const auto& id : pool_ids) pool_members.push_back(c.index_of(id));
    const PublicationSet pool(pool_members);

    // rci = citations / (total / size) = citations * size / total
    const auto exact_rci = [&](const std::string& id) {
      const auto& [year, cites] = facts.at(id);
      return Fraction{static_cast<__int128>(cites * sizes[year]), static_cast<__int128>(totals[year])};
    };
    const auto greedy = optimize_submission(index, pool, k, table, w);
    Fraction greedy_sum;
    for (auto p : greedy.subset) greedy_sum = greedy_sum + exact_rci(c.id_of(p));

    Fraction best{-1, 1};
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
      Fraction sum;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) sum = sum + exact_rci(pool_ids[i]);
      }
      if (best < sum) best = sum;
    }
    mismatches += greedy_sum == best ? 0 : 1;
    ++pools;
  }
  return {mismatches == 0, fmt::format("{} of {} pools differ from the exhaustive optimum", mismatches, pools)};
}

Outcome criterion_6() {
  const std::vector<std::pair<double, RciClass>> expected = {
      {0.0, RciClass::Zero}, {0.01, RciClass::I}, {0.79, RciClass::I},  {0.80, RciClass::II},
      {1.19, RciClass::II},  {1.20, RciClass::III}, {1.99, RciClass::III}, {2.00, RciClass::IV},
      {3.99, RciClass::IV},  {4.00, RciClass::V},  {7.99, RciClass::V},  {8.00, RciClass::VI},
  };
  std::size_t wrong = 0;
  for (const auto& [value, cls] : expected) wrong += classify_rci(value) == cls ? 0 : 1;
  const bool eight = classify_rci(rci(8, 0.9)) == RciClass::VI;
  return {wrong == 0 && eight, fmt::format("{} of 12 boundary values misclassified; rci(8, 0.9) = {:.3f} in class {}",
                                           wrong, rci(8, 0.9), to_string(classify_rci(rci(8, 0.9))))};
}

Outcome criterion_7() {
  std::mt19937_64 rng(777);
  std::lognormal_distribution<double> skewed(1.5, 1.1);
  std::size_t mismatches = 0, non_monotone = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint32_t> year(1 + rng() % 400);
    for (auto& v : year) v = static_cast<std::uint32_t>(std::floor(skewed(rng))) * (rng() % 5 == 0 ? 0u : 1u);
    std::uint32_t previous = UINT32_MAX;
    for (int p : kPercentiles) {
      const auto t = percentile_threshold(year, p);
      mismatches += t == oracle::threshold(year, p) ? 0 : 1;
      non_monotone += t <= previous ? 0 : 1;
      previous = t;
    }
  }
  return {mismatches == 0 && non_monotone == 0,
          fmt::format("{} threshold mismatches, {} monotonicity violations over 200 years", mismatches, non_monotone)};
}

Outcome criterion_8() {
  std::ifstream in(kFixtures / "dentistry_ratings.csv");
  std::string line;
  std::getline(in, line);
  std::vector<RatedValue> pairs;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    pairs.push_back({line.substr(0, a), line.substr(a + 1, b - a - 1),
                     static_cast<std::uint32_t>(std::stoul(line.substr(b + 1)))});
  }
  const ConfusionMatrix m = confusion_matrix(pairs, BandScheme::parse("4;5;6-7;8+"));
  const std::string shown = fmt::format("{:.0f}%", m.percent_correct);
  return {shown == "83%" && m.correct == 5 && m.total == 6,
          fmt::format("{} of {} on the diagonal, percent correct {}", m.correct, m.total, shown)};
}

Outcome criterion_9() {
  std::ifstream in(kFixtures / "annex2_h2.csv");
  std::string line;
  std::getline(in, line);
  std::map<std::string, std::uint32_t> values;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    values[line.substr(0, comma)] = static_cast<std::uint32_t>(std::stoul(line.substr(comma + 1)));
  }
  std::string got;
  for (const auto& row : h2_percentile_table(values)) got += (got.empty() ? "" : "/") + std::to_string(row.threshold);
  return {got == "8/7/6/4/3", fmt::format("thresholds {} over {} institutions", got, values.size())};
}

Outcome criterion_10() {
  bool identity = true;
  for (std::uint32_t h2 = 0; h2 <= 12; ++h2) identity = identity && size_adjusted_h2(h2, 1) == static_cast<double>(h2);
  const double p1 = predict_h2(1);
  return {identity && std::abs(p1 - 3.0) <= 1e-12,
          fmt::format("size_adjusted_h2(h2, 1) == h2: {}; predict_h2(1) = {}", identity ? "yes" : "no", p1)};
}

long peak_rss_kib() {
  std::ifstream status("/proc/self/status");
  for (std::string line; std::getline(status, line);) {
    if (line.rfind("VmHWM:", 0) == 0) return std::stol(line.substr(6));
  }
  return -1;
}

Outcome criterion_11() {
  SynthSpec spec;
  spec.n_pubs = 100000;
  spec.log_mean = 1.85;
  spec.log_sd = 1.0;
  spec.n_institutions = 200;
  spec.seed = 11;
  const auto t_synth = Clock::now();
  const Corpus c = synthesize_corpus(spec);
  const double synth_s = seconds_since(t_synth);

  const auto t0 = Clock::now();
  const Window w = Window::make(spec.first_year, spec.last_year, spec.last_year + 1);
  const FieldCode field("0705");
  const CitationIndex index(c, {});
  const BenchmarkTable table = build_benchmark(index, field, w);
  std::size_t reports = 0;
  for (const auto& inst : c.institutions()) {
    const MetricReport r = rec_table(index, inst.id, field, w, table);
    reports += r.total_articles > 0 ? 1 : 0;
  }
  SelectionFilter f;
  f.field = field;
  f.window = w;
  const IndexValue field_h2 = index.indirect_h2(select(c, f));
  const IndexValue all_h2 = index.indirect_h2(c.all());
  const double metric_s = seconds_since(t0);
  const long rss = peak_rss_kib();
  const bool scale = c.size() >= 100000 && c.edge_count() >= 900000;
  return {scale && metric_s < 10.0 && rss >= 0 && rss < 2L * 1024 * 1024,
          fmt::format("{} pubs / {} edges; benchmark + {} institution tables + H2 (field {}, corpus {}) in {:.2f} s; "
                      "corpus generation {:.2f} s; peak RSS {} MiB",
                      c.size(), c.edge_count(), reports, field_h2.value, all_h2.value, metric_s, synth_s, rss / 1024)};
}

Outcome criterion_12() {
  const fs::path a = pipeline::fresh_dir("acceptance-a");
  const fs::path b = pipeline::fresh_dir("acceptance-b");
  std::size_t failures = 0;
  for (const auto& s : pipeline::run_desk_pipeline(a)) failures += s.exit_code == 0 ? 0 : 1;
  for (const auto& s : pipeline::run_desk_pipeline(b)) failures += s.exit_code == 0 ? 0 : 1;
  const auto ta = pipeline::read_tree(a);
  const auto tb = pipeline::read_tree(b);
  std::size_t differing = 0;
  for (const auto& [name, bytes] : ta) differing += (tb.count(name) && tb.at(name) == bytes) ? 0 : 1;
  differing += ta.size() == tb.size() ? 0 : 1;
  return {failures == 0 && differing == 0 && !ta.empty(),
          fmt::format("{} files compared, {} differ, {} failed steps", ta.size(), differing, failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", criterion_1},     {"ordering invariant", criterion_2},
      {"monotonicity", criterion_3},           {"gaming reproduction", criterion_4},
      {"optimizer exactness", criterion_5},    {"RCI boundaries", criterion_6},
      {"percentile thresholds", criterion_7},  {"confusion matrix", criterion_8},
      {"H2 percentile table", criterion_9},    {"size adjustment", criterion_10},
      {"performance", criterion_11},           {"determinism", criterion_12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << fmt::format("{} criterion {:>2} ({}): {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                             o.detail)
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed;
}
