#include "scholimetric/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace scholimetric {

using nlohmann::json;

namespace csv {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw DomainError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace csv

namespace {

bool getline_trimmed(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

json parse_json_line(const std::string& line, const std::string& source, std::size_t lineno) {
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw ParseError(source, lineno, "<record>", "expected a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ParseError(source, lineno, "<record>", std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* field, const std::string& source, std::size_t lineno) {
  const auto it = j.find(field);
  if (it == j.end()) throw ParseError(source, lineno, field, "missing");
  return *it;
}

std::string require_string(const json& j, const char* field, const std::string& source, std::size_t lineno) {
  const json& v = require(j, field, source, lineno);
  if (!v.is_string()) throw ParseError(source, lineno, field, "expected string");
  return v.get<std::string>();
}

std::vector<std::string> string_array(const json& j, const char* field, const std::string& source, std::size_t lineno) {
  std::vector<std::string> out;
  const auto it = j.find(field);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) throw ParseError(source, lineno, field, "expected array of strings");
  for (const auto& v : *it) {
    if (!v.is_string()) throw ParseError(source, lineno, field, "expected array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<std::string> read_header(std::istream& in, const std::string& source,
                                     const std::vector<std::string>& expected) {
  std::string line;
  if (!getline_trimmed(in, line)) throw ParseError(source, 1, "<header>", "empty file");
  auto cols = csv::split_line(line);
  if (cols != expected) {
    std::string want;
    for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
    throw ParseError(source, 1, "<header>", "expected header `" + want + "`");
  }
  return cols;
}

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

}  // namespace

void read_publications(std::istream& in, const std::string& source, CorpusBuilder& builder) {
  std::string line;
  std::size_t lineno = 0;
  while (getline_trimmed(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const json j = parse_json_line(line, source, lineno);
    CorpusBuilder::PublicationInput pub;
    pub.id = require_string(j, "id", source, lineno);
    if (pub.id.empty()) throw ParseError(source, lineno, "id", "must not be empty");
    const json& year = require(j, "year", source, lineno);
    if (!year.is_number_integer()) throw ParseError(source, lineno, "year", "expected integer");
    pub.year = year.get<int>();
    if (pub.year < kMinYear || pub.year > kMaxYear) {
      throw ParseError(source, lineno, "year", "outside [" + std::to_string(kMinYear) + ", " + std::to_string(kMaxYear) + "]");
    }
    if (const auto it = j.find("issn"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) throw ParseError(source, lineno, "issn", "expected string or null");
      try {
        pub.issn = normalize_issn(it->get<std::string>());
      } catch (const DomainError& e) {
        throw ParseError(source, lineno, "issn", e.what());
      }
    }
    pub.institutions = string_array(j, "institutions", source, lineno);
    pub.keywords = string_array(j, "keywords", source, lineno);
    if (builder.has_publication(pub.id)) throw DuplicateIdError("publication", pub.id);
    builder.add_publication(std::move(pub));
  }
}

void read_citations(std::istream& in, const std::string& source, CorpusBuilder& builder) {
  std::string line;
  std::size_t lineno = 0;
  while (getline_trimmed(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const json j = parse_json_line(line, source, lineno);
    const std::string citing = require_string(j, "citing", source, lineno);
    const std::string cited = require_string(j, "cited", source, lineno);
    if (citing.empty()) throw ParseError(source, lineno, "citing", "must not be empty");
    if (cited.empty()) throw ParseError(source, lineno, "cited", "must not be empty");
    if (citing == cited) throw ParseError(source, lineno, "cited", "self-citation edge \"" + citing + "\"");
    builder.add_citation(citing, cited);
  }
}

void read_journals(std::istream& in, const std::string& source, CorpusBuilder& builder) {
  read_header(in, source, {"issn", "name", "for_codes"});
  std::string line;
  std::size_t lineno = 1;
  while (getline_trimmed(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::vector<std::string> f;
    try {
      f = csv::split_line(line);
    } catch (const DomainError& e) {
      throw ParseError(source, lineno, "<record>", e.what());
    }
    if (f.size() != 3) throw ParseError(source, lineno, "<record>", "expected 3 columns, got " + std::to_string(f.size()));
    std::vector<FieldCode> codes;
    std::size_t pos = 0;
    while (pos <= f[2].size()) {
      const std::size_t stop = std::min(f[2].find(';', pos), f[2].size());
      try {
        codes.emplace_back(std::string_view(f[2]).substr(pos, stop - pos));
      } catch (const DomainError& e) {
        throw ParseError(source, lineno, "for_codes", e.what());
      }
      pos = stop + 1;
    }
    try {
      builder.add_journal(f[0], f[1], std::move(codes));
    } catch (const DuplicateIdError&) {
      throw;
    } catch (const DomainError& e) {
      throw ParseError(source, lineno, "issn", e.what());
    }
  }
}

void read_institutions(std::istream& in, const std::string& source, CorpusBuilder& builder) {
  read_header(in, source, {"id", "name", "country", "staff_count"});
  std::string line;
  std::size_t lineno = 1;
  while (getline_trimmed(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::vector<std::string> f;
    try {
      f = csv::split_line(line);
    } catch (const DomainError& e) {
      throw ParseError(source, lineno, "<record>", e.what());
    }
    if (f.size() != 4) throw ParseError(source, lineno, "<record>", "expected 4 columns, got " + std::to_string(f.size()));
    if (f[0].empty()) throw ParseError(source, lineno, "id", "must not be empty");
    Institution inst{f[0], f[1], f[2], std::nullopt};
    if (!f[3].empty()) {
      std::uint32_t staff = 0;
      const auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), staff);
      if (ec != std::errc{} || ptr != f[3].data() + f[3].size() || staff == 0) {
        throw ParseError(source, lineno, "staff_count", "expected positive integer or empty");
      }
      inst.staff_count = staff;
    }
    builder.add_institution(std::move(inst));
  }
}

Corpus ingest(const CorpusSources& sources) {
  CorpusBuilder builder;
  if (sources.journals) {
    auto in = open_input(*sources.journals);
    read_journals(in, sources.journals->string(), builder);
  }
  if (sources.institutions) {
    auto in = open_input(*sources.institutions);
    read_institutions(in, sources.institutions->string(), builder);
  }
  {
    auto in = open_input(sources.publications);
    read_publications(in, sources.publications.string(), builder);
  }
  {
    auto in = open_input(sources.citations);
    read_citations(in, sources.citations.string(), builder);
  }
  return std::move(builder).build();
}

void write_publications(std::ostream& out, const Corpus& corpus) {
  for (const auto& p : corpus.publications()) {
    if (p.external) continue;
    json j;
    j["id"] = p.id;
    j["year"] = *p.year;
    j["issn"] = p.issn ? json(display_issn(*p.issn)) : json(nullptr);
    json insts = json::array();
    for (auto i : p.institutions) insts.push_back(corpus.institution(i).id);
    j["institutions"] = std::move(insts);
    j["keywords"] = p.keywords;
    out << j.dump() << '\n';
  }
}

void write_citations(std::ostream& out, const Corpus& corpus) {
  for (std::uint32_t i = 0; i < corpus.size(); ++i) {
    const PubIndex citing{i};
    for (auto cited : corpus.references(citing)) {
      out << json{{"citing", corpus.id_of(citing)}, {"cited", corpus.id_of(cited)}}.dump() << '\n';
    }
  }
}

void write_journals(std::ostream& out, const Corpus& corpus) {
  out << "issn,name,for_codes\n";
  for (const auto& j : corpus.journals()) {
    std::string codes;
    for (const auto& c : j.for_codes) codes += (codes.empty() ? "" : ";") + c.str();
    out << display_issn(j.issn) << ',' << csv::quote(j.name) << ',' << codes << '\n';
  }
}

void write_institutions(std::ostream& out, const Corpus& corpus) {
  out << "id,name,country,staff_count\n";
  for (const auto& inst : corpus.institutions()) {
    out << csv::quote(inst.id) << ',' << csv::quote(inst.name) << ',' << csv::quote(inst.country) << ',';
    if (inst.staff_count) out << *inst.staff_count;
    out << '\n';
  }
}

void write_snapshot(const std::filesystem::path& dir, const Corpus& corpus) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "publications.jsonl");
    write_publications(out, corpus);
  }
  {
    auto out = open_output(dir / "citations.jsonl");
    write_citations(out, corpus);
  }
  {
    auto out = open_output(dir / "journals.csv");
    write_journals(out, corpus);
  }
  {
    auto out = open_output(dir / "institutions.csv");
    write_institutions(out, corpus);
  }
  std::size_t external = 0;
  for (const auto& p : corpus.publications()) external += p.external ? 1 : 0;
  json manifest = {
      {"publications", corpus.size() - external},
      {"external_publications", external},
      {"citations", corpus.edge_count()},
      {"journals", corpus.journals().size()},
      {"institutions", corpus.institutions().size()},
  };
  auto out = open_output(dir / "snapshot.json");
  out << manifest.dump(2) << '\n';
}

CorpusSources snapshot_sources(const std::filesystem::path& dir) {
  return CorpusSources{dir / "publications.jsonl", dir / "citations.jsonl", dir / "journals.csv", dir / "institutions.csv"};
}

}  // namespace scholimetric
