#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scholimetric/error.hpp"

namespace scholimetric {

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

/// Dense index of a publication inside one corpus snapshot.
enum class PubIndex : std::uint32_t {};
/// Dense index of an institution inside one corpus snapshot.
enum class InstIndex : std::uint32_t {};

constexpr std::uint32_t raw(PubIndex i) noexcept { return static_cast<std::uint32_t>(i); }
constexpr std::uint32_t raw(InstIndex i) noexcept { return static_cast<std::uint32_t>(i); }

/// Canonical ISSN key: 8 characters, hyphen removed, check digit upper-cased.
/// Throws DomainError on anything that is not 7 digits followed by a digit or X.
std::string normalize_issn(std::string_view text);
/// "03781127" -> "0378-1127"
std::string display_issn(std::string_view key);

/// Field of Research code: a 4-digit group ("0705"), a 2-digit division
/// ("07") or the multidisciplinary marker "MD".
class FieldCode {
 public:
  FieldCode() = default;
  explicit FieldCode(std::string_view text);

  const std::string& str() const noexcept { return code_; }
  bool is_group() const noexcept { return code_.size() == 4; }
  bool is_division() const noexcept { return code_.size() == 2 && code_ != "MD"; }
  bool is_multidisciplinary() const noexcept { return code_ == "MD"; }
  /// First two digits of a group code, the code itself for a division.
  std::string_view division() const noexcept { return std::string_view(code_).substr(0, 2); }

  auto operator<=>(const FieldCode&) const = default;

 private:
  std::string code_;
};

struct JournalRecord {
  std::string issn;  // normalized key
  std::string name;
  std::vector<FieldCode> for_codes;  // non-empty, in file order, no duplicates

  bool carries(const FieldCode& code) const;
};

struct Institution {
  std::string id;
  std::string name;
  std::string country;
  std::optional<std::uint32_t> staff_count;
};

struct Publication {
  std::string id;
  /// Unset only for external publications materialized from dangling citations.
  std::optional<int> year;
  std::optional<std::string> issn;     // normalized key
  std::vector<InstIndex> institutions; // sorted, unique
  std::vector<std::string> keywords;   // lowercase, sorted, unique
  bool external = false;
};

/// Inclusive publication-year window plus the census year.
struct Window {
  int start_year = 0;
  int end_year = 0;
  int census_year = 0;

  /// Validates start <= end <= census and the global year range.
  static Window make(int start, int end, int census);
  /// Parses "START:END:CENSUS".
  static Window parse(std::string_view text);

  bool contains(int year) const noexcept { return year >= start_year && year <= end_year; }
  bool operator==(const Window&) const = default;
};

/// Sorted, duplicate-free set of publications of one corpus.
class PublicationSet {
 public:
  PublicationSet() = default;
  /// Sorts and deduplicates.
  explicit PublicationSet(std::vector<PubIndex> members);
  PublicationSet(std::initializer_list<PubIndex> members) : PublicationSet(std::vector<PubIndex>(members)) {}

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(PubIndex p) const;
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }
  std::span<const PubIndex> members() const noexcept { return members_; }

  bool is_subset_of(const PublicationSet& other) const;
  PublicationSet unite(const PublicationSet& other) const;

  bool operator==(const PublicationSet&) const = default;

 private:
  std::vector<PubIndex> members_;
};

class CorpusBuilder;

/// Immutable, fully indexed snapshot of publications, citations and
/// registries. All analyses read from a snapshot; every const member is safe
/// to call concurrently.
class Corpus {
 public:
  std::size_t size() const noexcept { return pubs_.size(); }
  std::size_t edge_count() const noexcept { return in_targets_.size(); }

  const Publication& publication(PubIndex p) const { return pubs_[raw(p)]; }
  std::span<const Publication> publications() const noexcept { return pubs_; }
  std::optional<PubIndex> find(std::string_view id) const;
  /// Throws UnknownIdError.
  PubIndex index_of(std::string_view id) const;
  const std::string& id_of(PubIndex p) const { return pubs_[raw(p)].id; }

  /// Distinct publications citing `p`, ascending by index.
  std::span<const PubIndex> cited_by(PubIndex p) const;
  /// Distinct publications cited by `p`, ascending by index.
  std::span<const PubIndex> references(PubIndex p) const;

  std::span<const JournalRecord> journals() const noexcept { return journals_; }
  /// Lookup by normalized key; nullptr when the journal is not listed.
  const JournalRecord* journal(std::string_view issn_key) const;
  const JournalRecord* journal_of(PubIndex p) const;
  /// True when some listed journal carries `code`.
  bool knows_field(const FieldCode& code) const;

  std::span<const Institution> institutions() const noexcept { return institutions_; }
  const Institution& institution(InstIndex i) const { return institutions_[raw(i)]; }
  std::optional<InstIndex> find_institution(std::string_view id) const;

  /// True when the two publications share at least one institution.
  bool share_institution(PubIndex a, PubIndex b) const;

  /// Every publication index, in index order.
  PublicationSet all() const;

 private:
  friend class CorpusBuilder;
  Corpus() = default;

  std::vector<Publication> pubs_;
  std::unordered_map<std::string, PubIndex> pub_lookup_;
  // CSR adjacency. in_*: citing publications per cited one; out_*: the transpose.
  std::vector<std::uint32_t> in_offsets_, out_offsets_;
  std::vector<PubIndex> in_targets_, out_targets_;
  std::vector<JournalRecord> journals_;
  std::unordered_map<std::string, std::uint32_t> journal_lookup_;
  std::vector<Institution> institutions_;
  std::unordered_map<std::string, InstIndex> inst_lookup_;
};

/// Single-writer accumulator producing an immutable Corpus.
class CorpusBuilder {
 public:
  struct PublicationInput {
    std::string id;
    int year = 0;
    std::optional<std::string> issn;  // any accepted ISSN spelling
    std::vector<std::string> institutions;
    std::vector<std::string> keywords;
  };

  void add_journal(std::string_view issn, std::string name, std::vector<FieldCode> codes);
  void add_institution(Institution inst);
  void add_publication(PublicationInput pub);
  /// Self-citations are rejected. Duplicate edges collapse to one.
  void add_citation(std::string_view citing, std::string_view cited);

  bool has_publication(std::string_view id) const;
  std::size_t publication_count() const noexcept { return pubs_.size(); }

  /// Materializes dangling citation endpoints as bare external publications,
  /// then builds both adjacency indexes.
  Corpus build() &&;

 private:
  InstIndex intern_institution(const std::string& id);
  std::uint32_t intern_pub_name(std::string_view id);

  std::vector<Publication> pubs_;
  std::unordered_map<std::string, std::uint32_t> pub_lookup_;
  // Citation endpoints by name id; ids are resolved or materialized in build().
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> name_lookup_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<JournalRecord> journals_;
  std::unordered_map<std::string, std::uint32_t> journal_lookup_;
  std::vector<Institution> institutions_;
  std::unordered_map<std::string, InstIndex> inst_lookup_;
  std::vector<bool> inst_declared_;
};

}  // namespace scholimetric
