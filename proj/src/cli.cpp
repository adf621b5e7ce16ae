#include "scholimetric/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "scholimetric/benchmarks.hpp"
#include "scholimetric/classification.hpp"
#include "scholimetric/corpus.hpp"
#include "scholimetric/error.hpp"
#include "scholimetric/evaluation.hpp"
#include "scholimetric/io.hpp"
#include "scholimetric/metrics.hpp"
#include "scholimetric/select.hpp"
#include "scholimetric/synth.hpp"

namespace scholimetric::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string pubs, cites, journals, institutions_file;
  std::string corpus_dir, fixture;
  std::string field;
  std::string window;
  std::vector<std::string> institutions;
  std::string eligibility = "strict";
  bool exclude_self = false;
  bool cap_at_census = false;
  std::size_t min_size = 50;
  std::string bands;
  std::string keywords;
  std::string ratings, h2_values, levels;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  SynthSpec synth;
};

fs::path fixture_root() {
  if (const char* env = std::getenv("SCHOLIMETRIC_FIXTURES"); env != nullptr && *env != '\0') return env;
  return SCHOLIMETRIC_FIXTURE_DIR;
}

Corpus load_corpus(const RunConfig& cfg) {
  std::optional<fs::path> dir;
  if (!cfg.fixture.empty()) dir = fixture_root() / cfg.fixture;
  if (!cfg.corpus_dir.empty()) dir = cfg.corpus_dir;
  CorpusSources src;
  if (dir) {
    if (!fs::is_directory(*dir)) throw Error("corpus directory " + dir->string() + " does not exist");
    src = snapshot_sources(*dir);
    if (!fs::exists(*src.journals)) src.journals.reset();
    if (!fs::exists(*src.institutions)) src.institutions.reset();
  }
  if (!cfg.pubs.empty()) src.publications = cfg.pubs;
  if (!cfg.cites.empty()) src.citations = cfg.cites;
  if (!cfg.journals.empty()) src.journals = fs::path(cfg.journals);
  if (!cfg.institutions_file.empty()) src.institutions = fs::path(cfg.institutions_file);
  if (src.publications.empty() || src.citations.empty()) {
    throw Error("a corpus is required: give --pubs and --cites, --corpus DIR or --fixture NAME");
  }
  return ingest(src);
}

Window require_window(const RunConfig& cfg) {
  if (cfg.window.empty()) throw Error("--window START:END:CENSUS is required");
  return Window::parse(cfg.window);
}

FieldCode require_field(const RunConfig& cfg) {
  if (cfg.field.empty()) throw Error("--field is required");
  return FieldCode(cfg.field);
}

MetricOptions options_of(const RunConfig& cfg, const Window* window) {
  MetricOptions o;
  o.exclude_self_citations = cfg.exclude_self;
  if (cfg.cap_at_census && window != nullptr) o.citing_year_max = window->census_year;
  return o;
}

std::set<std::string> keyword_set(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  for (std::string kw; std::getline(ss, kw, ',');) {
    kw.erase(0, kw.find_first_not_of(' '));
    kw.erase(kw.find_last_not_of(' ') + 1);
    std::transform(kw.begin(), kw.end(), kw.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!kw.empty()) out.insert(kw);
  }
  return out;
}

/// Sends each named output to a file in --out, or to stdout when no
/// directory was given (only the outputs marked for stdout).
class Sink {
 public:
  Sink(const RunConfig& cfg, std::ostream& out) : out_(out) {
    if (!cfg.out_dir.empty()) {
      dir_ = cfg.out_dir;
      fs::create_directories(*dir_);
    }
  }

  bool to_directory() const { return dir_.has_value(); }
  const fs::path& directory() const { return *dir_; }

  void emit(const std::string& name, bool on_stdout, const std::function<void(std::ostream&)>& write) {
    if (dir_) {
      std::ofstream f(*dir_ / name, std::ios::binary);
      if (!f) throw Error("cannot write " + (*dir_ / name).string());
      write(f);
      if (!f) throw Error("failed writing " + (*dir_ / name).string());
    } else if (on_stdout) {
      write(out_);
    }
  }

 private:
  std::ostream& out_;
  std::optional<fs::path> dir_;
};

std::vector<std::vector<std::string>> read_csv(const std::string& path, const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path, 1, "header", "file is empty");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto got = csv::split_line(line);
  if (!std::equal(header.begin(), header.end(), got.begin(), got.end()) &&
      !(got.size() >= header.size() && std::equal(header.begin(), header.end(), got.begin()))) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw ParseError(path, 1, "header", "expected columns " + want);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = csv::split_line(line);
    if (cells.size() != got.size()) {
      throw ParseError(path, lineno, "record", fmt::format("expected {} columns, got {}", got.size(), cells.size()));
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::uint32_t parse_count(const std::string& text, const std::string& path, std::size_t line, const char* field) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(path, line, field, "expected a non-negative integer, got \"" + text + "\"");
  }
  return v;
}

std::map<std::string, std::uint32_t> read_h2_values(const std::string& path) {
  std::map<std::string, std::uint32_t> values;
  std::size_t line = 1;
  for (const auto& row : read_csv(path, {"institution", "h2"})) {
    ++line;
    if (!values.emplace(row[0], parse_count(row[1], path, line, "h2")).second) {
      throw DuplicateIdError("institution", row[0]);
    }
  }
  return values;
}

// ------------------------------------------------------------ commands

int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out_dir.empty()) throw Error("ingest needs --out DIR for the snapshot");
  const Corpus corpus = load_corpus(cfg);
  write_snapshot(cfg.out_dir, corpus);
  out << fmt::format("publications {}\ncitations {}\njournals {}\ninstitutions {}\n", corpus.size(),
                     corpus.edge_count(), corpus.journals().size(), corpus.institutions().size());
  return 0;
}

int cmd_benchmark(const RunConfig& cfg, std::ostream& out) {
  const Window window = require_window(cfg);
  const FieldCode field = require_field(cfg);
  const Corpus corpus = load_corpus(cfg);
  const CitationIndex index(corpus, options_of(cfg, &window));
  const BenchmarkTable table = build_benchmark(index, field, window);
  Sink sink(cfg, out);
  sink.emit("benchmark.json", true, [&](std::ostream& o) { write_benchmark_json(o, table); });
  sink.emit("benchmark.txt", false, [&](std::ostream& o) { write_benchmark_text(o, table); });
  return 0;
}

SelectionFilter filter_of(const RunConfig& cfg, const Window& window) {
  SelectionFilter f;
  f.institutions = cfg.institutions;
  if (!cfg.field.empty()) f.field = FieldCode(cfg.field);
  f.window = window;
  f.eligibility = parse_eligibility(cfg.eligibility);
  return f;
}

int cmd_metrics(const RunConfig& cfg, std::ostream& out) {
  const Window window = require_window(cfg);
  const Corpus corpus = load_corpus(cfg);
  const CitationIndex index(corpus, options_of(cfg, &window));
  const SelectionFilter filter = filter_of(cfg, window);
  const PublicationSet pubs = select(corpus, filter);
  const IndexValue h = index.hirsch_of_set(pubs);
  const IndexValue h2 = index.indirect_h2(pubs);

  nlohmann::ordered_json doc;
  doc["selection"] = {{"institutions", filter.institutions},
                      {"field", cfg.field},
                      {"eligibility", std::string(to_string(filter.eligibility))},
                      {"window", {{"start", window.start_year}, {"end", window.end_year}, {"census", window.census_year}}},
                      {"exclude_self_citations", cfg.exclude_self}};
  doc["publications"] = pubs.size();
  doc["h"] = h.value;
  doc["h_core"] = h.core;
  doc["h2"] = h2.value;
  doc["h2_core"] = h2.core;
  Sink sink(cfg, out);
  sink.emit("metrics.json", true, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
  sink.emit("publications.csv", false, [&](std::ostream& o) {
    o << "id,year,citations,single_publication_h\n";
    for (auto p : pubs) {
      const auto& pub = corpus.publication(p);
      o << csv::quote(pub.id) << ',' << *pub.year << ',' << index.count(p) << ',' << index.single_publication_h(p)
        << '\n';
    }
  });
  return 0;
}

int cmd_rec_table(const RunConfig& cfg, std::ostream& out) {
  const Window window = require_window(cfg);
  const FieldCode field = require_field(cfg);
  if (cfg.institutions.empty()) throw Error("rec-table needs at least one --institution");
  const Corpus corpus = load_corpus(cfg);
  const CitationIndex index(corpus, options_of(cfg, &window));
  const BenchmarkTable table = build_benchmark(index, field, window);
  const EligibilityMode mode = parse_eligibility(cfg.eligibility);
  std::vector<MetricReport> reports;
  for (const auto& inst : cfg.institutions) reports.push_back(rec_table(index, inst, field, window, table, mode));
  Sink sink(cfg, out);
  sink.emit("rec_table.txt", true, [&](std::ostream& o) { write_rec_table_text(o, reports); });
  sink.emit("rec_table.json", false, [&](std::ostream& o) { write_rec_table_json(o, reports); });
  return 0;
}

int cmd_game(const RunConfig& cfg, std::ostream& out) {
  const Window window = require_window(cfg);
  const FieldCode field = require_field(cfg);
  if (cfg.institutions.size() != 1) throw Error("game needs exactly one --institution");
  const Corpus corpus = load_corpus(cfg);
  const CitationIndex index(corpus, options_of(cfg, &window));
  const BenchmarkTable table = build_benchmark(index, field, window);
  GamingSpec spec;
  spec.institution = cfg.institutions.front();
  spec.field = field;
  spec.window = window;
  spec.keywords = keyword_set(cfg.keywords);
  spec.min_size = cfg.min_size;
  const GamingReport report = run_gaming_experiment(index, spec, table);
  Sink sink(cfg, out);
  sink.emit("game.txt", true, [&](std::ostream& o) { write_gaming_text(o, report); });
  sink.emit("game.json", false, [&](std::ostream& o) { write_gaming_json(o, report); });
  sink.emit("selective_subset.txt", false, [&](std::ostream& o) {
    for (auto p : report.selective_subset) o << corpus.id_of(p) << '\n';
  });
  return 0;
}

int cmd_confusion(const RunConfig& cfg, std::ostream& out) {
  if (cfg.ratings.empty()) throw Error("confusion needs --ratings FILE");
  if (cfg.bands.empty()) throw Error("confusion needs --bands, e.g. \"4;5;6-7;8+\"");
  const BandScheme scheme = BandScheme::parse(cfg.bands);
  std::optional<std::map<std::string, std::uint32_t>> h2s;
  if (!cfg.h2_values.empty()) h2s = read_h2_values(cfg.h2_values);

  std::vector<RatedValue> pairs;
  std::set<std::string> seen;
  std::size_t line = 1;
  const auto rows = h2s ? read_csv(cfg.ratings, {"institution", "rating"})
                        : read_csv(cfg.ratings, {"institution", "rating", "h2"});
  for (const auto& row : rows) {
    ++line;
    if (!seen.insert(row[0]).second) throw DuplicateIdError("institution", row[0]);
    RatedValue v{row[0], row[1], 0};
    if (v.rating.empty()) throw ParseError(cfg.ratings, line, "rating", "empty rating");
    if (h2s) {
      const auto it = h2s->find(row[0]);
      if (it == h2s->end()) throw UnknownIdError("institution", row[0]);
      v.h2 = it->second;
    } else {
      v.h2 = parse_count(row[2], cfg.ratings, line, "h2");
    }
    pairs.push_back(std::move(v));
  }
  std::vector<std::string> levels;
  std::stringstream ss(cfg.levels);
  for (std::string level; std::getline(ss, level, ',');) levels.push_back(level);
  const ConfusionMatrix m = cfg.levels.empty() ? confusion_matrix(pairs, scheme)
                                               : confusion_matrix(pairs, scheme, std::move(levels));
  Sink sink(cfg, out);
  sink.emit("confusion.csv", true, [&](std::ostream& o) { write_confusion_csv(o, m); });
  return 0;
}

int cmd_percentiles(const RunConfig& cfg, std::ostream& out) {
  Sink sink(cfg, out);
  std::map<std::string, std::uint32_t> values;
  if (!cfg.h2_values.empty()) {
    values = read_h2_values(cfg.h2_values);
  } else {
    const Window window = require_window(cfg);
    const Corpus corpus = load_corpus(cfg);
    const CitationIndex index(corpus, options_of(cfg, &window));
    std::vector<std::string> ids = cfg.institutions;
    if (ids.empty()) {
      for (const auto& inst : corpus.institutions()) ids.push_back(inst.id);
    }
    std::vector<std::pair<std::string, PublicationSet>> sets;
    for (const auto& id : ids) {
      RunConfig one = cfg;
      one.institutions = {id};
      sets.emplace_back(id, select(corpus, filter_of(one, window)));
    }
    const Scatter scatter = h_vs_h2_scatter(index, sets);
    for (const auto& p : scatter.points) values[p.institution] = p.h2;
    sink.emit("scatter.csv", false, [&](std::ostream& o) { write_scatter_csv(o, scatter); });
  }
  const auto rows = h2_percentile_table(values);
  sink.emit("h2_percentiles.txt", true, [&](std::ostream& o) { write_h2_percentiles_text(o, rows); });
  sink.emit("h2_percentiles.json", false, [&](std::ostream& o) { write_h2_percentiles_json(o, rows); });
  return 0;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.seed) throw Error("synth requires --seed");
  if (cfg.out_dir.empty()) throw Error("synth needs --out DIR");
  SynthSpec spec = cfg.synth;
  spec.seed = *cfg.seed;
  const Corpus corpus = synthesize_corpus(spec);
  write_snapshot(cfg.out_dir, corpus);
  out << fmt::format("publications {}\ncitations {}\n", corpus.size(), corpus.edge_count());
  return 0;
}

int cmd_distribution(const RunConfig& cfg, std::ostream& out) {
  const Window window = require_window(cfg);
  const FieldCode field = require_field(cfg);
  const Corpus corpus = load_corpus(cfg);
  const CitationIndex index(corpus, options_of(cfg, &window));
  const auto curves = distribution_export(index, field, window);
  Sink sink(cfg, out);
  sink.emit("distribution.csv", true, [&](std::ostream& o) { write_distribution_csv(o, curves); });
  sink.emit("distribution_means.json", false, [&](std::ostream& o) { write_distribution_means_json(o, curves); });
  for (const auto& inst : cfg.institutions) {
    RunConfig one = cfg;
    one.institutions = {inst};
    const auto overlay = distribution_export(index, select(corpus, filter_of(one, window)), window);
    sink.emit("distribution_" + inst + ".csv", false, [&](std::ostream& o) { write_distribution_csv(o, overlay); });
  }
  return 0;
}

// Field eligibility of an institution's whole window output.
int cmd_partition(const RunConfig& cfg, std::ostream& out) {
  const Window window = require_window(cfg);
  const FieldCode field = require_field(cfg);
  const Corpus corpus = load_corpus(cfg);
  RunConfig any_field = cfg;
  any_field.field.clear();
  any_field.eligibility = "all";
  const PublicationSet pubs = select(corpus, filter_of(any_field, window));
  const EligibilityPartition part = partition(corpus, pubs, field);
  const SubmissionBounds bounds = submission_bounds(corpus, pubs, field);
  Sink sink(cfg, out);
  sink.emit("partition.csv", true, [&](std::ostream& o) { write_partition_report(o, part, bounds); });
  return 0;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

void add_corpus_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--pubs", cfg.pubs, "Publications JSONL");
  cmd->add_option("--cites", cfg.cites, "Citations JSONL");
  cmd->add_option("--journals", cfg.journals, "Journal registry CSV");
  cmd->add_option("--institutions", cfg.institutions_file, "Institution registry CSV");
  cmd->add_option("--corpus", cfg.corpus_dir, "Directory holding the corpus files");
  cmd->add_option("--fixture", cfg.fixture, "Bundled fixture directory name");
}

void add_analysis_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--window", cfg.window, "START:END:CENSUS");
  cmd->add_flag("--exclude-self-citations", cfg.exclude_self, "Drop citations between co-affiliated publications");
  cmd->add_flag("--cap-at-census", cfg.cap_at_census, "Ignore citing publications after the census year");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Citation-graph metrics for research evaluation", "scholimetric"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a corpus and write a normalized snapshot");
  add_corpus_flags(ingest_cmd, cfg);
  ingest_cmd->add_option("--out", cfg.out_dir, "Snapshot directory");

  auto* bench = app.add_subcommand("benchmark", "Per-year mean citations and percentile thresholds of a field");
  add_corpus_flags(bench, cfg);
  add_analysis_flags(bench, cfg);
  bench->add_option("--field", cfg.field, "Four-digit field code");
  bench->add_option("--out", cfg.out_dir, "Output directory");

  auto* metrics = app.add_subcommand("metrics", "h, per-publication h and H2 of a selected set");
  add_corpus_flags(metrics, cfg);
  add_analysis_flags(metrics, cfg);
  metrics->add_option("--field", cfg.field, "Four-digit field code");
  metrics->add_option("--institution", cfg.institutions, "Institution id (repeatable)");
  metrics->add_option("--eligibility", cfg.eligibility, "strict | implicit | all");
  metrics->add_option("--out", cfg.out_dir, "Output directory");

  auto* rec = app.add_subcommand("rec-table", "Committee-style indicator table per institution");
  add_corpus_flags(rec, cfg);
  add_analysis_flags(rec, cfg);
  rec->add_option("--field", cfg.field, "Four-digit field code");
  rec->add_option("--institution", cfg.institutions, "Institution id (repeatable, one column each)");
  rec->add_option("--eligibility", cfg.eligibility, "strict | implicit | all");
  rec->add_option("--out", cfg.out_dir, "Output directory");

  auto* game = app.add_subcommand("game", "Strict, all-inclusive and selective submissions side by side");
  add_corpus_flags(game, cfg);
  add_analysis_flags(game, cfg);
  game->add_option("--field", cfg.field, "Four-digit field code");
  game->add_option("--institution", cfg.institutions, "Institution id");
  game->add_option("--keywords", cfg.keywords, "Comma-separated reassignment keywords");
  game->add_option("--min-size", cfg.min_size, "Articles in the selective submission")->capture_default_str();
  game->add_option("--out", cfg.out_dir, "Output directory");

  auto* conf = app.add_subcommand("confusion", "Ratings against H2 bands");
  conf->add_option("--ratings", cfg.ratings, "CSV institution,rating[,h2]");
  conf->add_option("--h2-values", cfg.h2_values, "CSV institution,h2 (when ratings has no h2 column)");
  conf->add_option("--bands", cfg.bands, "Band spec, e.g. \"4;5;6-7;8+\"");
  conf->add_option("--levels", cfg.levels, "Comma-separated rating levels, lowest first (default: those present)");
  conf->add_option("--out", cfg.out_dir, "Output directory");

  auto* pct = app.add_subcommand("percentiles", "H2 percentile thresholds across institutions");
  add_corpus_flags(pct, cfg);
  add_analysis_flags(pct, cfg);
  pct->add_option("--h2-values", cfg.h2_values, "CSV institution,h2 instead of a corpus");
  pct->add_option("--field", cfg.field, "Four-digit field code");
  pct->add_option("--institution", cfg.institutions, "Institution id (repeatable; default all)");
  pct->add_option("--eligibility", cfg.eligibility, "strict | implicit | all");
  pct->add_option("--out", cfg.out_dir, "Output directory");

  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
  synth->add_option("--seed", cfg.seed, "Random seed (required)");
  synth->add_option("--n-pubs", cfg.synth.n_pubs, "Publications")->capture_default_str();
  synth->add_option("--first-year", cfg.synth.first_year, "First publication year")->capture_default_str();
  synth->add_option("--last-year", cfg.synth.last_year, "Last publication year")->capture_default_str();
  synth->add_option("--log-mean", cfg.synth.log_mean, "Mean of log citation counts")->capture_default_str();
  synth->add_option("--log-sd", cfg.synth.log_sd, "Standard deviation of log citation counts")->capture_default_str();
  synth->add_option("--n-institutions", cfg.synth.n_institutions, "Institutions")->capture_default_str();
  synth->add_option("--out", cfg.out_dir, "Output directory");

  auto* dist = app.add_subcommand("distribution", "Ranked citation curves per year");
  add_corpus_flags(dist, cfg);
  add_analysis_flags(dist, cfg);
  dist->add_option("--field", cfg.field, "Four-digit field code");
  dist->add_option("--institution", cfg.institutions, "Institution to overlay (repeatable)");
  dist->add_option("--eligibility", cfg.eligibility, "strict | implicit | all");
  dist->add_option("--out", cfg.out_dir, "Output directory");

  auto* part = app.add_subcommand("partition", "Explicit, implicit and excluded articles for a field");
  add_corpus_flags(part, cfg);
  add_analysis_flags(part, cfg);
  part->add_option("--field", cfg.field, "Four-digit field code");
  part->add_option("--institution", cfg.institutions, "Institution id (repeatable)");
  part->add_option("--out", cfg.out_dir, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (ingest_cmd->parsed()) return cmd_ingest(cfg, out);
    if (bench->parsed()) return cmd_benchmark(cfg, out);
    if (metrics->parsed()) return cmd_metrics(cfg, out);
    if (rec->parsed()) return cmd_rec_table(cfg, out);
    if (game->parsed()) return cmd_game(cfg, out);
    if (conf->parsed()) return cmd_confusion(cfg, out);
    if (pct->parsed()) return cmd_percentiles(cfg, out);
    if (synth->parsed()) return cmd_synth(cfg, out);
    if (dist->parsed()) return cmd_distribution(cfg, out);
    if (part->parsed()) return cmd_partition(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 2;
  }
  return 2;
}

}  // namespace scholimetric::cli
