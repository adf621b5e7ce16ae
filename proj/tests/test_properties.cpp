#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "support.hpp"
#include "scholimetric/evaluation.hpp"
#include "scholimetric/io.hpp"

using namespace scholimetric;

namespace {

PublicationSet subset_of(const PublicationSet& s, std::mt19937_64& rng) {
  std::vector<PubIndex> keep;
  for (auto p : s) {
    if (rng() % 2 == 0) keep.push_back(p);
  }
  return PublicationSet(std::move(keep));
}

}  // namespace

TEST_CASE("index ordering holds on random corpora") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const Corpus c = oracle::random_recipe(rng, 120, 900).build();
    const CitationIndex index(c, oracle::random_options(rng));
    const PublicationSet s = oracle::random_subset(rng, c);
    const auto h = index.hirsch_of_set(s).value;
    const auto h2 = index.indirect_h2(s).value;
    REQUIRE(h2 <= h);
    REQUIRE(h <= s.size());
    for (std::uint32_t i = 0; i < c.size(); ++i) {
      REQUIRE(index.single_publication_h(PubIndex{i}) <= index.count(PubIndex{i}));
    }
  }
}

TEST_CASE("indices never shrink when publications or citations are added") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 25; ++trial) {
    oracle::Recipe r = oracle::random_recipe(rng, 50, 300);
    std::set<std::pair<std::string, std::string>> edges(r.edges.begin(), r.edges.end());
    std::vector<std::string> members;
    for (const auto& p : r.pubs) {
      if (rng() % 2 == 0) members.push_back(p.id);
    }
    const auto measure = [&] {
      const Corpus c = r.build();
      std::vector<PubIndex> v;
      for (const auto& id : members) v.push_back(c.index_of(id));
      const CitationIndex index(c, {});
      const PublicationSet s(std::move(v));
      return std::pair{index.hirsch_of_set(s).value, index.indirect_h2(s).value};
    };
    auto before = measure();
    for (int step = 0; step < 10; ++step) {
      const std::size_t n = r.pubs.size();
      if (step % 3 == 0) {
        r.pubs.push_back(oracle::random_pub(rng, n));
        members.push_back(r.pubs.back().id);
      } else {
        const auto from = oracle::pub_id(rng() % n);
        const auto to = oracle::pub_id(rng() % n);
        if (from != to && edges.emplace(from, to).second) r.edges.emplace_back(from, to);
      }
      const auto after = measure();
      REQUIRE(after.first >= before.first);
      REQUIRE(after.second >= before.second);
      before = after;
    }
  }
}

TEST_CASE("subset H2 is bounded by the pool and kept when the core survives") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    const Corpus c = oracle::random_recipe(rng, 100, 800).build();
    const CitationIndex index(c, {});
    const PublicationSet pool = oracle::random_subset(rng, c);
    const IndexValue whole = index.indirect_h2(pool);
    const PublicationSet part = subset_of(pool, rng);
    REQUIRE(index.indirect_h2(part).value <= whole.value);

    std::vector<PubIndex> with_core(part.begin(), part.end());
    for (const auto& id : whole.core) with_core.push_back(c.index_of(id));
    std::sort(with_core.begin(), with_core.end());
    with_core.erase(std::unique(with_core.begin(), with_core.end()), with_core.end());
    REQUIRE(index.indirect_h2(PublicationSet(with_core)).value == whole.value);
  }
}

TEST_CASE("cumulative percentile shares are monotone") {
  const Corpus c = ingest(snapshot_sources(support::fixture_dir() / "forestry-desk"));
  const CitationIndex index(c, {});
  const Window w = Window::make(2005, 2010, 2011);
  const BenchmarkTable table = build_benchmark(index, FieldCode("0705"), w);
  for (const auto& inst : c.institutions()) {
    const MetricReport r = rec_table(index, inst.id, FieldCode("0705"), w, table);
    for (std::size_t k = 1; k < kPercentileCount; ++k) {
      REQUIRE(r.percentile_counts[k - 1] <= r.percentile_counts[k]);
      REQUIRE(r.percentile_shares[k - 1] <= r.percentile_shares[k]);
    }
    if (r.total_articles > 0) REQUIRE(r.percentile_counts.back() + r.uncited <= r.total_articles);
  }
}

TEST_CASE("confusion matrix cells add up") {
  std::mt19937_64 rng(8);
  const BandScheme scheme = BandScheme::parse("<=3;4-5;6-8;9+");
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RatedValue> pairs(1 + rng() % 40);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      pairs[i] = {"u" + std::to_string(i), std::to_string(1 + rng() % 4), static_cast<std::uint32_t>(rng() % 14)};
    }
    const ConfusionMatrix m = confusion_matrix(pairs, scheme, {"1", "2", "3", "4"});
    std::size_t sum = 0, diag = 0;
    for (std::size_t r = 0; r < m.counts.size(); ++r) {
      for (std::size_t col = 0; col < m.counts[r].size(); ++col) sum += m.counts[r][col];
      diag += m.counts[r][r];
    }
    REQUIRE(sum == pairs.size());
    REQUIRE(m.total == pairs.size());
    REQUIRE(m.correct == diag);
    REQUIRE(m.percent_correct == Catch::Approx(100.0 * static_cast<double>(diag) / static_cast<double>(sum)));
  }
}

TEST_CASE("small submissions match exhaustive search") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    support::Mini m;
    m.journal("0705-0011", {"0705"});
    std::vector<std::string> ids;
    for (int k = 0; k < 10; ++k) {
      ids.push_back("a" + std::to_string(k));
      m.pub(ids.back(), 2005 + static_cast<int>(rng() % 2), "0705-0011");
      m.cited_times(ids.back(), static_cast<int>(1 + rng() % 12));
    }
    const Corpus c = m.build();
    const CitationIndex index(c, {});
    const Window w = Window::make(2005, 2006, 2011);
    const BenchmarkTable table = build_benchmark(index, FieldCode("0705"), w);
    const PublicationSet pool = support::set_of(c, ids);
    const std::size_t k = 1 + rng() % 5;
    const SubmissionOutcome got = optimize_submission(index, pool, k, table, w);
    REQUIRE(got.subset.size() == k);

    double best = -1.0;
    for (std::uint32_t mask = 0; mask < (1u << ids.size()); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
      std::vector<PubIndex> v;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (mask & (1u << i)) v.push_back(c.index_of(ids[i]));
      }
      best = std::max(best, report_for_set(index, PublicationSet(v), table, w, "x").mean_rci);
    }
    REQUIRE(got.after.mean_rci == Catch::Approx(best).epsilon(1e-12));
  }
}
