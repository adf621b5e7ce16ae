#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scholimetric/benchmarks.hpp"
#include "scholimetric/corpus.hpp"
#include "scholimetric/metrics.hpp"
#include "scholimetric/select.hpp"

namespace scholimetric {

/// Everything an evaluation committee table shows for one publication set.
struct MetricReport {
  std::string label;  // institution id or case name
  FieldCode field;
  Window window;

  std::size_t total_articles = 0;
  /// Articles whose year has a positive cpp; RCI statistics use only these.
  std::size_t rci_articles = 0;
  double mean_rci = 0.0;
  double median_rci = 0.0;
  std::array<std::size_t, kRciClassCount> class_counts{};
  std::array<double, kRciClassCount> class_shares{};
  /// Cited articles at or above each band threshold (cumulative), aligned with kPercentiles.
  std::array<std::size_t, kPercentileCount> percentile_counts{};
  std::array<double, kPercentileCount> percentile_shares{};
  std::size_t uncited = 0;
  double uncited_share = 0.0;
  IndexValue h;
  IndexValue h2;
};

/// Report for an arbitrary publication set. Throws MissingYearError when a
/// member's publication year has no benchmark row.
MetricReport report_for_set(const CitationIndex& index, const PublicationSet& pubs, const BenchmarkTable& benchmark,
                            const Window& window, std::string label);

/// Report for one institution's field output in the window.
MetricReport rec_table(const CitationIndex& index, std::string_view institution, const FieldCode& field,
                       const Window& window, const BenchmarkTable& benchmark,
                       EligibilityMode eligibility = EligibilityMode::Strict);

struct SubmissionOutcome {
  PublicationSet subset;
  MetricReport before;
  MetricReport after;
  /// Whether the pool's H2 core is entirely inside the subset.
  bool core_survived = false;
  /// Subset members come from more than one publication year, so per-year
  /// percentile bars are not monotone in RCI across the subset.
  bool mixes_years = false;
};

/// Size-`min_size` subset of `pool` with maximal mean RCI: the top
/// `min_size` articles by RCI, ties by publication id.
SubmissionOutcome optimize_submission(const CitationIndex& index, const PublicationSet& pool, std::size_t min_size,
                                      const BenchmarkTable& benchmark, const Window& window);

struct GamingSpec {
  std::string institution;
  FieldCode field;
  Window window;
  std::set<std::string> keywords;  // empty: all-inclusive equals strict
  std::size_t min_size = 50;
};

/// Strict, all-inclusive (keyword reassignment) and selective submissions.
struct GamingReport {
  MetricReport all_inclusive;
  MetricReport strict;
  MetricReport selective;
  PublicationSet selective_subset;
  bool core_survived = false;
  bool mixes_years = false;
};

GamingReport run_gaming_experiment(const CitationIndex& index, const GamingSpec& spec, const BenchmarkTable& benchmark);

// ------------------------------------------------------------ confusion

struct Band {
  std::string label;
  std::uint32_t low = 0;
  std::optional<std::uint32_t> high;  // inclusive; unset = open top
};

/// Ordered, contiguous H2 bands covering 0..infinity.
class BandScheme {
 public:
  /// Parses "4;5;6-7;8+". Pieces are `a`, `a-b`, `a+`, `<=a` or `>=a`. The
  /// lowest band absorbs every value below it; the last band must be open.
  static BandScheme parse(std::string_view text);
  explicit BandScheme(std::vector<Band> bands);

  std::span<const Band> bands() const noexcept { return bands_; }
  std::size_t size() const noexcept { return bands_.size(); }
  std::size_t band_of(std::uint32_t h2) const;

 private:
  std::vector<Band> bands_;
};

struct RatedValue {
  std::string institution;
  std::string rating;  // opaque ordinal label
  std::uint32_t h2 = 0;
};

struct ConfusionMatrix {
  std::vector<std::string> ratings;  // row labels, ascending
  std::vector<std::string> bands;    // column labels
  std::vector<std::vector<std::size_t>> counts;
  std::size_t correct = 0;
  std::size_t total = 0;
  double percent_correct = 0.0;
};

/// Rating levels sort numerically when every label is a number, otherwise
/// lexicographically; the i-th level is "correct" in the i-th band.
ConfusionMatrix confusion_matrix(std::span<const RatedValue> pairs, const BandScheme& scheme);
/// Same, with the ordered rating levels given explicitly, so levels no
/// institution holds still get a row.
ConfusionMatrix confusion_matrix(std::span<const RatedValue> pairs, const BandScheme& scheme,
                                 std::vector<std::string> levels);
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m);

// ------------------------------------------------------------ institutions

struct H2Percentile {
  int percentile = 0;
  std::uint32_t threshold = 0;
  std::size_t at_or_above = 0;
  std::vector<std::string> at_threshold;  // institutions whose H2 equals the threshold
};

std::vector<H2Percentile> h2_percentile_table(const std::map<std::string, std::uint32_t>& values,
                                              std::span<const int> percentiles = kPercentiles);

/// h2 - ln(N). Throws DomainError when N < 1.
double size_adjusted_h2(std::uint32_t h2, std::uint32_t staff);
/// Reference fit of H2 against team size: 3.0 + 1.05 ln(N).
double predict_h2(std::uint32_t staff);
inline constexpr double kSizeFitIntercept = 3.0;
inline constexpr double kSizeFitSlope = 1.05;

struct ScatterPoint {
  std::string institution;
  std::uint32_t h = 0;
  std::uint32_t h2 = 0;
};

struct Scatter {
  std::vector<ScatterPoint> points;
  std::optional<double> correlation;  // unset for < 2 points or a constant column
};

Scatter h_vs_h2_scatter(const CitationIndex& index,
                        std::span<const std::pair<std::string, PublicationSet>> institution_sets);

// ------------------------------------------------------------ rendering

/// Aligned text mirroring the committee table, one column per report.
void write_rec_table_text(std::ostream& out, std::span<const MetricReport> reports);
void write_rec_table_json(std::ostream& out, std::span<const MetricReport> reports);
/// Three columns: all-inclusive, strict, selective.
void write_gaming_text(std::ostream& out, const GamingReport& report);
void write_gaming_json(std::ostream& out, const GamingReport& report);
void write_h2_percentiles_text(std::ostream& out, std::span<const H2Percentile> rows);
void write_h2_percentiles_json(std::ostream& out, std::span<const H2Percentile> rows);
void write_scatter_csv(std::ostream& out, const Scatter& scatter);

}  // namespace scholimetric
