#include "scholimetric/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace scholimetric {

std::uint32_t percentile_threshold(std::span<const std::uint32_t> values, int pct) {
  if (pct <= 0 || pct > 100) throw DomainError("percentile must be in (0, 100], got " + std::to_string(pct));
  if (values.empty()) return 0;
  // The m-th largest value, m = ceil(pct% of n): at least m values reach it,
  // and any larger bar is reached by at most m - 1 < pct% of them.
  const std::size_t m = (static_cast<std::size_t>(pct) * values.size() + 99) / 100;
  std::vector<std::uint32_t> v(values.begin(), values.end());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m - 1), v.end(), std::greater<>());
  return v[m - 1];
}

BenchmarkTable::BenchmarkTable(FieldCode field, std::vector<YearBenchmark> years)
    : field_(std::move(field)), years_(std::move(years)) {
  std::sort(years_.begin(), years_.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
}

const YearBenchmark* BenchmarkTable::find(int year) const {
  const auto it = std::lower_bound(years_.begin(), years_.end(), year,
                                   [](const YearBenchmark& y, int v) { return y.year < v; });
  return it != years_.end() && it->year == year ? &*it : nullptr;
}

const YearBenchmark& BenchmarkTable::at(int year) const {
  if (const auto* y = find(year)) return *y;
  throw MissingYearError(year);
}

namespace {

std::map<int, std::vector<std::uint32_t>> counts_by_year(const CitationIndex& index, const Window& window,
                                                         const std::function<bool(PubIndex)>& keep) {
  const Corpus& corpus = index.corpus();
  std::map<int, std::vector<std::uint32_t>> by_year;
  for (std::uint32_t i = 0; i < corpus.size(); ++i) {
    const PubIndex p{i};
    const auto& year = corpus.publication(p).year;
    if (!year || !window.contains(*year) || !keep(p)) continue;
    by_year[*year].push_back(index.count(p));
  }
  return by_year;
}

std::function<bool(PubIndex)> in_field(const Corpus& corpus, const FieldCode& field) {
  if (!corpus.knows_field(field)) throw UnknownIdError("field", field.str());
  return [&corpus, field](PubIndex p) {
    const JournalRecord* j = corpus.journal_of(p);
    return j != nullptr && j->carries(field);
  };
}

double mean_of(const std::vector<std::uint32_t>& v) {
  double sum = 0.0;
  for (auto x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

}  // namespace

BenchmarkTable build_benchmark(const CitationIndex& index, const FieldCode& field, const Window& window) {
  std::vector<YearBenchmark> rows;
  for (const auto& [year, counts] : counts_by_year(index, window, in_field(index.corpus(), field))) {
    YearBenchmark row;
    row.year = year;
    row.n_articles = static_cast<std::uint32_t>(counts.size());
    row.cpp = mean_of(counts);
    for (std::size_t k = 0; k < kPercentileCount; ++k) row.thresholds[k] = percentile_threshold(counts, kPercentiles[k]);
    rows.push_back(row);
  }
  return BenchmarkTable(field, std::move(rows));
}

BenchmarkTable build_benchmark(const Corpus& corpus, const FieldCode& field, const Window& window,
                               const MetricOptions& options) {
  return build_benchmark(CitationIndex(corpus, options), field, window);
}

double rci(std::uint32_t citations, double cpp) {
  if (!(cpp > 0.0)) throw DomainError("RCI undefined: mean citations per paper is " + fmt::format("{}", cpp));
  return static_cast<double>(citations) / cpp;
}

RciClass classify_rci(double value) {
  if (std::isnan(value) || value < 0.0) throw DomainError(fmt::format("RCI must be non-negative, got {}", value));
  if (value == 0.0) return RciClass::Zero;
  if (value < 0.8) return RciClass::I;
  if (value < 1.2) return RciClass::II;
  if (value < 2.0) return RciClass::III;
  if (value < 4.0) return RciClass::IV;
  if (value < 8.0) return RciClass::V;
  return RciClass::VI;
}

std::string_view to_string(RciClass c) {
  static constexpr std::string_view names[] = {"0", "I", "II", "III", "IV", "V", "VI"};
  return names[static_cast<int>(c)];
}

bool PercentileMembership::contains(int pct) const {
  for (std::size_t k = 0; k < kPercentileCount; ++k) {
    if (kPercentiles[k] == pct) return member[k];
  }
  return false;
}

PercentileMembership percentile_membership(std::uint32_t citations, int year, const BenchmarkTable& table) {
  const YearBenchmark& row = table.at(year);
  PercentileMembership m;
  for (std::size_t k = 0; k < kPercentileCount; ++k) m.member[k] = citations >= row.thresholds[k];
  m.uncited = citations == 0;
  return m;
}

namespace {

std::vector<DistributionCurve> curves_from(std::map<int, std::vector<std::uint32_t>> by_year) {
  std::vector<DistributionCurve> out;
  for (auto& [year, counts] : by_year) {
    DistributionCurve c;
    c.year = year;
    std::sort(counts.begin(), counts.end(), std::greater<>());
    c.mean = mean_of(counts);
    c.citations = std::move(counts);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<DistributionCurve> distribution_export(const CitationIndex& index, const FieldCode& field,
                                                   const Window& window) {
  return curves_from(counts_by_year(index, window, in_field(index.corpus(), field)));
}

std::vector<DistributionCurve> distribution_export(const CitationIndex& index, const PublicationSet& subset,
                                                   const Window& window) {
  return curves_from(counts_by_year(index, window, [&](PubIndex p) { return subset.contains(p); }));
}

void write_benchmark_json(std::ostream& out, const BenchmarkTable& table) {
  nlohmann::ordered_json doc;
  doc["field"] = table.field().str();
  doc["years"] = nlohmann::ordered_json::array();
  for (const auto& y : table.years()) {
    nlohmann::ordered_json row;
    row["year"] = y.year;
    row["cpp"] = y.cpp;
    row["n"] = y.n_articles;
    nlohmann::ordered_json thr;
    for (std::size_t k = 0; k < kPercentileCount; ++k) thr["p" + std::to_string(kPercentiles[k])] = y.thresholds[k];
    row["thresholds"] = std::move(thr);
    doc["years"].push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

void write_benchmark_text(std::ostream& out, const BenchmarkTable& table) {
  out << fmt::format("Field {}: mean citations per article and percentile thresholds\n", table.field().str());
  out << fmt::format("{:<6}{:>8}{:>7}{:>6}{:>6}{:>6}{:>6}{:>8}\n", "Year", "Mean", "n", "1%", "5%", "10%", "25%", "Median");
  for (const auto& y : table.years()) {
    out << fmt::format("{:<6}{:>8.1f}{:>7}{:>6}{:>6}{:>6}{:>6}{:>8}\n", y.year, y.cpp, y.n_articles, y.thresholds[0],
                       y.thresholds[1], y.thresholds[2], y.thresholds[3], y.thresholds[4]);
  }
}

void write_distribution_csv(std::ostream& out, std::span<const DistributionCurve> curves) {
  out << "year,rank,citations\n";
  for (const auto& c : curves) {
    for (std::size_t r = 0; r < c.citations.size(); ++r) out << c.year << ',' << r + 1 << ',' << c.citations[r] << '\n';
  }
}

void write_distribution_means_json(std::ostream& out, std::span<const DistributionCurve> curves) {
  nlohmann::ordered_json doc;
  doc["means"] = nlohmann::ordered_json::array();
  for (const auto& c : curves) {
    nlohmann::ordered_json row;
    row["year"] = c.year;
    row["mean"] = c.mean;
    row["n"] = c.citations.size();
    doc["means"].push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace scholimetric
