#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scholimetric/corpus.hpp"
#include "scholimetric/metrics.hpp"

namespace scholimetric {

/// The five percentile bands reported for citation distributions, top 1% to
/// the median.
inline constexpr std::array<int, 5> kPercentiles = {1, 5, 10, 25, 50};
inline constexpr std::size_t kPercentileCount = kPercentiles.size();

/// Threshold of the top `pct` percent of `values`: the largest c such that
/// at least pct% of the values are >= c. Ties at c are all inside the band,
/// so the realized share can exceed pct%. Returns 0 for an empty input.
std::uint32_t percentile_threshold(std::span<const std::uint32_t> values, int pct);

struct YearBenchmark {
  int year = 0;
  double cpp = 0.0;  // mean citations per article, full precision
  std::uint32_t n_articles = 0;
  std::array<std::uint32_t, kPercentileCount> thresholds{};  // aligned with kPercentiles
};

class BenchmarkTable {
 public:
  BenchmarkTable() = default;
  BenchmarkTable(FieldCode field, std::vector<YearBenchmark> years);

  const FieldCode& field() const noexcept { return field_; }
  std::span<const YearBenchmark> years() const noexcept { return years_; }
  const YearBenchmark* find(int year) const;
  /// Throws MissingYearError.
  const YearBenchmark& at(int year) const;

 private:
  FieldCode field_;
  std::vector<YearBenchmark> years_;  // ascending, no gaps filled
};

/// Global per-year calibration over every article in journals carrying
/// `field`, regardless of institution. Years without articles are omitted.
BenchmarkTable build_benchmark(const CitationIndex& index, const FieldCode& field, const Window& window);
BenchmarkTable build_benchmark(const Corpus& corpus, const FieldCode& field, const Window& window,
                               const MetricOptions& options = {});

/// Relative citation impact. Throws DomainError unless cpp > 0.
double rci(std::uint32_t citations, double cpp);

enum class RciClass { Zero, I, II, III, IV, V, VI };
inline constexpr std::size_t kRciClassCount = 7;

/// 0 | (0, 0.8) | [0.8, 1.2) | [1.2, 2) | [2, 4) | [4, 8) | [8, inf).
/// Throws DomainError on negative or NaN input.
RciClass classify_rci(double value);
std::string_view to_string(RciClass c);

struct PercentileMembership {
  std::array<bool, kPercentileCount> member{};  // aligned with kPercentiles
  bool uncited = false;
  bool contains(int pct) const;
};

/// Cumulative band membership of an article with `citations` published in
/// `year`. Throws MissingYearError.
PercentileMembership percentile_membership(std::uint32_t citations, int year, const BenchmarkTable& table);

struct DistributionCurve {
  int year = 0;
  std::vector<std::uint32_t> citations;  // descending
  double mean = 0.0;
};

/// Per-year descending citation curves of the field's articles in the window.
std::vector<DistributionCurve> distribution_export(const CitationIndex& index, const FieldCode& field,
                                                   const Window& window);
/// Same, restricted to `subset` (used to overlay institutions on the global curve).
std::vector<DistributionCurve> distribution_export(const CitationIndex& index, const PublicationSet& subset,
                                                   const Window& window);

/// JSON `{field, years: [{year, cpp, n, thresholds: {p1, p5, p10, p25, p50}}]}`.
void write_benchmark_json(std::ostream& out, const BenchmarkTable& table);
/// Aligned text, one row per year, cpp to one decimal.
void write_benchmark_text(std::ostream& out, const BenchmarkTable& table);
/// CSV `year,rank,citations`, rank starting at 1.
void write_distribution_csv(std::ostream& out, std::span<const DistributionCurve> curves);
/// JSON `{means: [{year, mean, n}]}`.
void write_distribution_means_json(std::ostream& out, std::span<const DistributionCurve> curves);

}  // namespace scholimetric
