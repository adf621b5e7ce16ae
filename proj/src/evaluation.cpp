#include "scholimetric/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "scholimetric/classification.hpp"

namespace scholimetric {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double share(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

int year_of(const Corpus& corpus, PubIndex p) {
  const auto& pub = corpus.publication(p);
  if (!pub.year) throw DomainError("publication \"" + pub.id + "\" has no publication year");
  return *pub.year;
}

}  // namespace

MetricReport report_for_set(const CitationIndex& index, const PublicationSet& pubs, const BenchmarkTable& benchmark,
                            const Window& window, std::string label) {
  const Corpus& corpus = index.corpus();
  MetricReport r;
  r.label = std::move(label);
  r.field = benchmark.field();
  r.window = window;
  r.total_articles = pubs.size();

  std::vector<double> rcis;
  rcis.reserve(pubs.size());
  for (auto p : pubs) {
    const std::uint32_t c = index.count(p);
    const YearBenchmark& row = benchmark.at(year_of(corpus, p));
    if (c == 0) ++r.uncited;
    for (std::size_t k = 0; k < kPercentileCount; ++k) {
      if (c > 0 && c >= row.thresholds[k]) ++r.percentile_counts[k];
    }
    if (row.cpp > 0.0) {
      const double value = rci(c, row.cpp);
      ++r.class_counts[static_cast<std::size_t>(classify_rci(value))];
      rcis.push_back(value);
    }
  }
  r.rci_articles = rcis.size();
  r.mean_rci = rcis.empty() ? 0.0 : std::accumulate(rcis.begin(), rcis.end(), 0.0) / static_cast<double>(rcis.size());
  r.median_rci = median_of(std::move(rcis));
  for (std::size_t k = 0; k < kRciClassCount; ++k) r.class_shares[k] = share(r.class_counts[k], r.rci_articles);
  for (std::size_t k = 0; k < kPercentileCount; ++k) r.percentile_shares[k] = share(r.percentile_counts[k], r.total_articles);
  r.uncited_share = share(r.uncited, r.total_articles);
  r.h = index.hirsch_of_set(pubs);
  r.h2 = index.indirect_h2(pubs);
  return r;
}

MetricReport rec_table(const CitationIndex& index, std::string_view institution, const FieldCode& field,
                       const Window& window, const BenchmarkTable& benchmark, EligibilityMode eligibility) {
  SelectionFilter filter;
  filter.institutions.emplace_back(institution);
  filter.field = field;
  filter.window = window;
  filter.eligibility = eligibility;
  const PublicationSet pubs = select(index.corpus(), filter);
  return report_for_set(index, pubs, benchmark, window, std::string(institution));
}

SubmissionOutcome optimize_submission(const CitationIndex& index, const PublicationSet& pool, std::size_t min_size,
                                      const BenchmarkTable& benchmark, const Window& window) {
  if (min_size == 0) throw DomainError("min_size must be at least 1");
  if (pool.size() < min_size) {
    throw DomainError("pool has " + std::to_string(pool.size()) + " publications, fewer than min_size " +
                      std::to_string(min_size));
  }
  const Corpus& corpus = index.corpus();
  struct Ranked {
    PubIndex pub;
    std::optional<double> rci_value;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(pool.size());
  for (auto p : pool) {
    const YearBenchmark& row = benchmark.at(year_of(corpus, p));
    ranked.push_back({p, row.cpp > 0.0 ? std::optional<double>(rci(index.count(p), row.cpp)) : std::nullopt});
  }
  // Undefined RCI ranks last; it never contributes to the mean.
  std::sort(ranked.begin(), ranked.end(), [&](const Ranked& a, const Ranked& b) {
    if (a.rci_value.has_value() != b.rci_value.has_value()) return a.rci_value.has_value();
    if (a.rci_value && *a.rci_value != *b.rci_value) return *a.rci_value > *b.rci_value;
    return corpus.id_of(a.pub) < corpus.id_of(b.pub);
  });
  std::vector<PubIndex> chosen;
  chosen.reserve(min_size);
  for (std::size_t k = 0; k < min_size; ++k) chosen.push_back(ranked[k].pub);

  SubmissionOutcome out;
  out.subset = PublicationSet(std::move(chosen));
  out.before = report_for_set(index, pool, benchmark, window, "pool");
  out.after = report_for_set(index, out.subset, benchmark, window, "subset");
  out.core_survived = std::all_of(out.before.h2.core.begin(), out.before.h2.core.end(),
                                  [&](const std::string& id) { return out.subset.contains(corpus.index_of(id)); });
  std::set<int> years;
  for (auto p : out.subset) years.insert(year_of(corpus, p));
  out.mixes_years = years.size() > 1;
  return out;
}

GamingReport run_gaming_experiment(const CitationIndex& index, const GamingSpec& spec, const BenchmarkTable& benchmark) {
  const Corpus& corpus = index.corpus();
  SelectionFilter strict_filter;
  strict_filter.institutions = {spec.institution};
  strict_filter.field = spec.field;
  strict_filter.window = spec.window;
  strict_filter.eligibility = EligibilityMode::Strict;
  const PublicationSet strict = select(corpus, strict_filter);

  PublicationSet inclusive = strict;
  if (!spec.keywords.empty()) {
    SelectionFilter candidates_filter = strict_filter;
    candidates_filter.eligibility = EligibilityMode::All;
    inclusive = expand_reassignment(corpus, strict, select(corpus, candidates_filter), spec.keywords);
  }

  SubmissionOutcome sel = optimize_submission(index, inclusive, spec.min_size, benchmark, spec.window);
  GamingReport g;
  g.all_inclusive = std::move(sel.before);
  g.all_inclusive.label = "all-inclusive";
  g.strict = report_for_set(index, strict, benchmark, spec.window, "strict");
  g.selective = std::move(sel.after);
  g.selective.label = "selective";
  g.selective_subset = std::move(sel.subset);
  g.core_survived = sel.core_survived;
  g.mixes_years = sel.mixes_years;
  return g;
}

// ------------------------------------------------------------ bands

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint32_t parse_uint(std::string_view s, std::string_view piece) {
  s = trim(s);
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("invalid band \"" + std::string(piece) + "\"");
  }
  return v;
}

bool strip_prefix(std::string_view& s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) != prefix) return false;
  s.remove_prefix(prefix.size());
  return true;
}

}  // namespace

BandScheme BandScheme::parse(std::string_view text) {
  std::vector<Band> bands;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t stop = std::min(text.find(';', pos), text.size());
    const std::string_view piece = trim(text.substr(pos, stop - pos));
    pos = stop + 1;
    if (piece.empty()) throw DomainError("empty band in \"" + std::string(text) + "\"");
    Band b;
    b.label = std::string(piece);
    std::string_view s = piece;
    if (strip_prefix(s, "<=") || strip_prefix(s, "\xE2\x89\xA4")) {
      b.low = 0;
      b.high = parse_uint(s, piece);
    } else if (strip_prefix(s, ">=") || strip_prefix(s, "\xE2\x89\xA5")) {
      b.low = parse_uint(s, piece);
    } else if (strip_prefix(s, ">")) {
      b.low = parse_uint(s, piece) + 1;
    } else if (!s.empty() && s.back() == '+') {
      b.low = parse_uint(s.substr(0, s.size() - 1), piece);
    } else if (const auto dash = s.find('-'); dash != std::string_view::npos) {
      b.low = parse_uint(s.substr(0, dash), piece);
      b.high = parse_uint(s.substr(dash + 1), piece);
    } else {
      b.low = parse_uint(s, piece);
      b.high = b.low;
    }
    bands.push_back(std::move(b));
  }
  if (!bands.empty()) bands.front().low = 0;
  return BandScheme(std::move(bands));
}

BandScheme::BandScheme(std::vector<Band> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) throw DomainError("band scheme needs at least one band");
  if (bands_.front().low != 0) throw DomainError("lowest band must start at 0");
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    const Band& b = bands_[i];
    const bool last = i + 1 == bands_.size();
    if (last != !b.high.has_value()) {
      throw DomainError(last ? "last band \"" + b.label + "\" must be open-ended (e.g. 8+)"
                             : "only the last band may be open-ended, got \"" + b.label + "\"");
    }
    if (b.high && *b.high < b.low) throw DomainError("band \"" + b.label + "\" is empty");
    if (!last && bands_[i + 1].low != *b.high + 1) {
      throw DomainError("bands \"" + b.label + "\" and \"" + bands_[i + 1].label + "\" are not contiguous");
    }
  }
}

std::size_t BandScheme::band_of(std::uint32_t h2) const {
  for (std::size_t i = 0; i + 1 < bands_.size(); ++i) {
    if (h2 <= *bands_[i].high) return i;
  }
  return bands_.size() - 1;
}

ConfusionMatrix confusion_matrix(std::span<const RatedValue> pairs, const BandScheme& scheme) {
  std::vector<std::string> levels;
  for (const auto& p : pairs) levels.push_back(p.rating);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const auto as_number = [](const std::string& s, double& v) {
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return !s.empty() && end == s.c_str() + s.size();
  };
  double unused = 0.0;
  if (std::all_of(levels.begin(), levels.end(), [&](const std::string& s) { return as_number(s, unused); })) {
    std::stable_sort(levels.begin(), levels.end(), [&](const std::string& a, const std::string& b) {
      double x = 0.0, y = 0.0;
      as_number(a, x);
      as_number(b, y);
      return x < y;
    });
  }
  return confusion_matrix(pairs, scheme, std::move(levels));
}

ConfusionMatrix confusion_matrix(std::span<const RatedValue> pairs, const BandScheme& scheme,
                                 std::vector<std::string> levels) {
  if (pairs.empty()) throw DomainError("confusion matrix needs at least one rated institution");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (std::find(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(i), levels[i]) !=
        levels.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw DomainError("rating level \"" + levels[i] + "\" listed twice");
    }
  }
  for (const auto& p : pairs) {
    if (std::find(levels.begin(), levels.end(), p.rating) == levels.end()) {
      throw DomainError("rating \"" + p.rating + "\" of " + p.institution + " is not a listed level");
    }
  }
  if (levels.size() != scheme.size()) {
    throw DomainError("ratings have " + std::to_string(levels.size()) + " levels but the band scheme has " +
                      std::to_string(scheme.size()) + " bands");
  }
  ConfusionMatrix m;
  m.ratings = levels;
  for (const auto& b : scheme.bands()) m.bands.push_back(b.label);
  m.counts.assign(levels.size(), std::vector<std::size_t>(scheme.size(), 0));
  for (const auto& p : pairs) {
    const auto row = static_cast<std::size_t>(std::find(levels.begin(), levels.end(), p.rating) - levels.begin());
    const std::size_t col = scheme.band_of(p.h2);
    ++m.counts[row][col];
    if (row == col) ++m.correct;
  }
  m.total = pairs.size();
  m.percent_correct = 100.0 * static_cast<double>(m.correct) / static_cast<double>(m.total);
  return m;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m) {
  out << "rating";
  for (const auto& b : m.bands) out << ',' << b;
  out << '\n';
  for (std::size_t i = 0; i < m.ratings.size(); ++i) {
    out << m.ratings[i];
    for (auto c : m.counts[i]) out << ',' << c;
    out << '\n';
  }
  out << fmt::format("percent_correct,{:.1f}\n", m.percent_correct);
}

// ------------------------------------------------------------ institutions

std::vector<H2Percentile> h2_percentile_table(const std::map<std::string, std::uint32_t>& values,
                                              std::span<const int> percentiles) {
  if (values.empty()) throw DomainError("percentile table needs at least one institution");
  std::vector<std::uint32_t> all;
  all.reserve(values.size());
  for (const auto& [id, v] : values) all.push_back(v);
  std::vector<H2Percentile> rows;
  for (int pct : percentiles) {
    H2Percentile row;
    row.percentile = pct;
    row.threshold = percentile_threshold(all, pct);
    for (const auto& [id, v] : values) {
      if (v >= row.threshold) ++row.at_or_above;
      if (v == row.threshold) row.at_threshold.push_back(id);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double size_adjusted_h2(std::uint32_t h2, std::uint32_t staff) {
  if (staff < 1) throw DomainError("staff count must be at least 1");
  return static_cast<double>(h2) - std::log(static_cast<double>(staff));
}

double predict_h2(std::uint32_t staff) {
  if (staff < 1) throw DomainError("staff count must be at least 1");
  return kSizeFitIntercept + kSizeFitSlope * std::log(static_cast<double>(staff));
}

Scatter h_vs_h2_scatter(const CitationIndex& index,
                        std::span<const std::pair<std::string, PublicationSet>> institution_sets) {
  Scatter s;
  std::vector<double> hs, h2s;
  for (const auto& [inst, pubs] : institution_sets) {
    ScatterPoint pt{inst, index.hirsch_of_set(pubs).value, index.indirect_h2(pubs).value};
    hs.push_back(pt.h);
    h2s.push_back(pt.h2);
    s.points.push_back(std::move(pt));
  }
  const auto constant = [](const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
  };
  if (s.points.size() >= 2 && !constant(hs) && !constant(h2s)) s.correlation = pearson_correlation(hs, h2s);
  return s;
}

// ------------------------------------------------------------ rendering

namespace {

std::string pct(double share) { return fmt::format("{:.0f}%", 100.0 * share); }

struct Row {
  std::string name;
  std::vector<std::string> cells;
};

std::vector<Row> table_rows(std::span<const MetricReport* const> reports) {
  std::vector<Row> rows;
  const auto add = [&](std::string name, auto&& cell) {
    Row r{std::move(name), {}};
    for (const MetricReport* m : reports) r.cells.push_back(cell(*m));
    rows.push_back(std::move(r));
  };
  add("Mean RCI", [](const MetricReport& m) { return fmt::format("{:.2f}", m.mean_rci); });
  add("Median RCI", [](const MetricReport& m) { return fmt::format("{:.2f}", m.median_rci); });
  rows.push_back({"RCI class (share of outputs)", {}});
  for (std::size_t k = 0; k < kRciClassCount; ++k) {
    add(fmt::format("  {}", to_string(static_cast<RciClass>(k))),
        [k](const MetricReport& m) { return pct(m.class_shares[k]); });
  }
  rows.push_back({"Percentile (cumulative share at or above)", {}});
  for (std::size_t k = 0; k < kPercentileCount; ++k) {
    add(kPercentiles[k] == 50 ? std::string("  Median") : fmt::format("  {}%", kPercentiles[k]),
        [k](const MetricReport& m) { return pct(m.percentile_shares[k]); });
  }
  add("Uncited articles", [](const MetricReport& m) { return pct(m.uncited_share); });
  add("Total indexed articles", [](const MetricReport& m) { return std::to_string(m.total_articles); });
  add("Hirsch h-index", [](const MetricReport& m) { return std::to_string(m.h.value); });
  add("Indirect H2 index", [](const MetricReport& m) { return std::to_string(m.h2.value); });
  return rows;
}

void write_rows(std::ostream& out, const std::vector<std::string>& headers, const std::vector<Row>& rows) {
  std::size_t name_w = 0;
  for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
  std::size_t cell_w = 8;
  for (const auto& h : headers) cell_w = std::max(cell_w, h.size());
  out << fmt::format("{:<{}}", "Performance indicator", name_w);
  for (const auto& h : headers) out << fmt::format("  {:>{}}", h, cell_w);
  out << '\n';
  for (const auto& r : rows) {
    if (r.cells.empty()) {
      out << r.name << '\n';
      continue;
    }
    out << fmt::format("{:<{}}", r.name, name_w);
    for (const auto& c : r.cells) out << fmt::format("  {:>{}}", c, cell_w);
    out << '\n';
  }
}

const char* const kSkewNote =
    "Note: mean RCI is an arithmetic mean of a skewed distribution; the median RCI is shown alongside.\n"
    "Note: percentile rows count cited articles only; uncited articles are reported separately.\n";

nlohmann::ordered_json report_json(const MetricReport& m) {
  nlohmann::ordered_json j;
  j["label"] = m.label;
  j["field"] = m.field.str();
  j["window"] = {{"start", m.window.start_year}, {"end", m.window.end_year}, {"census", m.window.census_year}};
  j["mean_rci"] = m.mean_rci;
  j["median_rci"] = m.median_rci;
  nlohmann::ordered_json classes;
  for (std::size_t k = 0; k < kRciClassCount; ++k) {
    classes[std::string(to_string(static_cast<RciClass>(k)))] = {{"count", m.class_counts[k]}, {"share", m.class_shares[k]}};
  }
  j["rci_classes"] = std::move(classes);
  nlohmann::ordered_json pcts;
  for (std::size_t k = 0; k < kPercentileCount; ++k) {
    pcts["p" + std::to_string(kPercentiles[k])] = {{"count", m.percentile_counts[k]}, {"share", m.percentile_shares[k]}};
  }
  j["percentiles"] = std::move(pcts);
  j["uncited_articles"] = {{"count", m.uncited}, {"share", m.uncited_share}};
  j["total_indexed_articles"] = m.total_articles;
  j["rci_articles"] = m.rci_articles;
  j["hirsch_h_index"] = m.h.value;
  j["indirect_h2_index"] = m.h2.value;
  j["h2_core"] = m.h2.core;
  return j;
}

}  // namespace

void write_rec_table_text(std::ostream& out, std::span<const MetricReport> reports) {
  std::vector<const MetricReport*> ptrs;
  std::vector<std::string> headers;
  for (const auto& r : reports) {
    ptrs.push_back(&r);
    headers.push_back(r.label);
  }
  if (!reports.empty()) {
    const auto& w = reports.front().window;
    out << fmt::format("Field {}, publications {}-{}\n", reports.front().field.str(), w.start_year, w.end_year);
  }
  write_rows(out, headers, table_rows(ptrs));
  out << kSkewNote;
}

void write_rec_table_json(std::ostream& out, std::span<const MetricReport> reports) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : reports) doc.push_back(report_json(r));
  out << doc.dump(2) << '\n';
}

void write_gaming_text(std::ostream& out, const GamingReport& g) {
  const MetricReport* cols[] = {&g.all_inclusive, &g.strict, &g.selective};
  out << fmt::format("Field {}, publications {}-{}\n", g.strict.field.str(), g.strict.window.start_year,
                     g.strict.window.end_year);
  write_rows(out, {"All-inclusive", "Strictly " + g.strict.field.str(), "Highly selective"}, table_rows(cols));
  out << kSkewNote;
  out << fmt::format("H2 core of the all-inclusive pool survives selection: {}\n", g.core_survived ? "yes" : "no");
  if (g.mixes_years) {
    out << "Selective subset spans several publication years; percentile shares were not optimized.\n";
  }
}

void write_gaming_json(std::ostream& out, const GamingReport& g) {
  nlohmann::ordered_json doc;
  doc["all_inclusive"] = report_json(g.all_inclusive);
  doc["strict"] = report_json(g.strict);
  doc["selective"] = report_json(g.selective);
  doc["core_survived"] = g.core_survived;
  doc["mixes_years"] = g.mixes_years;
  out << doc.dump(2) << '\n';
}

void write_h2_percentiles_text(std::ostream& out, std::span<const H2Percentile> rows) {
  out << fmt::format("{:<12}{:>4}{:>12}  {}\n", "Percentile", "H2", "At/above", "Institutions at threshold");
  for (const auto& r : rows) {
    std::string names;
    for (const auto& id : r.at_threshold) names += (names.empty() ? "" : ", ") + id;
    const std::string label = r.percentile == 50 ? "Median" : fmt::format("{}%", r.percentile);
    out << fmt::format("{:<12}{:>4}{:>12}  {}\n", label, r.threshold, r.at_or_above, names);
  }
}

void write_h2_percentiles_json(std::ostream& out, std::span<const H2Percentile> rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["percentile"] = r.percentile;
    j["h2"] = r.threshold;
    j["at_or_above"] = r.at_or_above;
    j["at_threshold"] = r.at_threshold;
    doc.push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

void write_scatter_csv(std::ostream& out, const Scatter& scatter) {
  out << "institution,h,h2\n";
  for (const auto& p : scatter.points) out << p.institution << ',' << p.h << ',' << p.h2 << '\n';
  if (scatter.correlation) out << fmt::format("# pearson_correlation,{:.6f}\n", *scatter.correlation);
}

}  // namespace scholimetric
