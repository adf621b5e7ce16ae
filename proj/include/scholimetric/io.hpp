#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "scholimetric/corpus.hpp"

namespace scholimetric {

/// Paths of the four flat files that make up a corpus. Journals and
/// institutions are optional.
struct CorpusSources {
  std::filesystem::path publications;
  std::filesystem::path citations;
  std::optional<std::filesystem::path> journals;
  std::optional<std::filesystem::path> institutions;
};

// Stream readers. `source` names the input in error messages.
void read_publications(std::istream& in, const std::string& source, CorpusBuilder& builder);
void read_citations(std::istream& in, const std::string& source, CorpusBuilder& builder);
void read_journals(std::istream& in, const std::string& source, CorpusBuilder& builder);
void read_institutions(std::istream& in, const std::string& source, CorpusBuilder& builder);

/// Reads every source and returns the indexed snapshot.
Corpus ingest(const CorpusSources& sources);

// Writers emit the same formats the readers accept. External publications
// are not written to the publications file; they re-materialize from the
// citations file on the next ingest.
void write_publications(std::ostream& out, const Corpus& corpus);
void write_citations(std::ostream& out, const Corpus& corpus);
void write_journals(std::ostream& out, const Corpus& corpus);
void write_institutions(std::ostream& out, const Corpus& corpus);

/// Writes publications.jsonl, citations.jsonl, journals.csv,
/// institutions.csv and snapshot.json into `dir` (created if needed).
void write_snapshot(const std::filesystem::path& dir, const Corpus& corpus);
/// Sources of a directory written by write_snapshot.
CorpusSources snapshot_sources(const std::filesystem::path& dir);

namespace csv {
/// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_line(std::string_view line);
/// Quotes a field when it contains a comma, quote or newline.
std::string quote(std::string_view field);
}  // namespace csv

}  // namespace scholimetric
