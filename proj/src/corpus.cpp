#include "scholimetric/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>

namespace scholimetric {

std::string normalize_issn(std::string_view text) {
  std::string key;
  key.reserve(8);
  for (char ch : text) {
    if (ch == '-' || ch == ' ') continue;
    key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  }
  bool ok = key.size() == 8;
  for (std::size_t i = 0; ok && i < 8; ++i) {
    const bool digit = std::isdigit(static_cast<unsigned char>(key[i])) != 0;
    ok = digit || (i == 7 && key[i] == 'X');
  }
  if (!ok) throw DomainError("invalid ISSN \"" + std::string(text) + "\"");
  return key;
}

std::string display_issn(std::string_view key) {
  return std::string(key.substr(0, 4)) + "-" + std::string(key.substr(4));
}

FieldCode::FieldCode(std::string_view text) : code_(text) {
  const bool digits = !code_.empty() && std::all_of(code_.begin(), code_.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
  if (!(code_ == "MD" || (digits && (code_.size() == 4 || code_.size() == 2)))) {
    throw DomainError("invalid FoR code \"" + code_ + "\" (expected 4 digits, 2 digits or MD)");
  }
}

bool JournalRecord::carries(const FieldCode& code) const {
  return std::find(for_codes.begin(), for_codes.end(), code) != for_codes.end();
}

Window Window::make(int start, int end, int census) {
  if (start < kMinYear || census > kMaxYear) {
    throw DomainError("window years must lie in [" + std::to_string(kMinYear) + ", " + std::to_string(kMaxYear) + "]");
  }
  if (!(start <= end && end <= census)) {
    throw DomainError("window requires start <= end <= census, got " + std::to_string(start) + ":" +
                      std::to_string(end) + ":" + std::to_string(census));
  }
  return Window{start, end, census};
}

Window Window::parse(std::string_view text) {
  int parts[3] = {0, 0, 0};
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t stop = k < 2 ? text.find(':', pos) : text.size();
    if (stop == std::string_view::npos) throw DomainError("window must be START:END:CENSUS, got \"" + std::string(text) + "\"");
    const std::string_view piece = text.substr(pos, stop - pos);
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), parts[k]);
    if (ec != std::errc{} || ptr != piece.data() + piece.size() || piece.empty()) {
      throw DomainError("window must be START:END:CENSUS, got \"" + std::string(text) + "\"");
    }
    pos = stop + 1;
  }
  return make(parts[0], parts[1], parts[2]);
}

// ---------------------------------------------------------------- PublicationSet

PublicationSet::PublicationSet(std::vector<PubIndex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool PublicationSet::contains(PubIndex p) const { return std::binary_search(members_.begin(), members_.end(), p); }

bool PublicationSet::is_subset_of(const PublicationSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

PublicationSet PublicationSet::unite(const PublicationSet& other) const {
  PublicationSet out;
  out.members_.reserve(members_.size() + other.members_.size());
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(out.members_));
  return out;
}

// ---------------------------------------------------------------- Corpus

std::optional<PubIndex> Corpus::find(std::string_view id) const {
  const auto it = pub_lookup_.find(std::string(id));
  if (it == pub_lookup_.end()) return std::nullopt;
  return it->second;
}

PubIndex Corpus::index_of(std::string_view id) const {
  if (auto p = find(id)) return *p;
  throw UnknownIdError("publication", std::string(id));
}

std::span<const PubIndex> Corpus::cited_by(PubIndex p) const {
  const auto i = raw(p);
  return std::span<const PubIndex>(in_targets_).subspan(in_offsets_[i], in_offsets_[i + 1] - in_offsets_[i]);
}

std::span<const PubIndex> Corpus::references(PubIndex p) const {
  const auto i = raw(p);
  return std::span<const PubIndex>(out_targets_).subspan(out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]);
}

const JournalRecord* Corpus::journal(std::string_view issn_key) const {
  const auto it = journal_lookup_.find(std::string(issn_key));
  return it == journal_lookup_.end() ? nullptr : &journals_[it->second];
}

const JournalRecord* Corpus::journal_of(PubIndex p) const {
  const auto& issn = pubs_[raw(p)].issn;
  return issn ? journal(*issn) : nullptr;
}

bool Corpus::knows_field(const FieldCode& code) const {
  return std::any_of(journals_.begin(), journals_.end(), [&](const JournalRecord& j) { return j.carries(code); });
}

std::optional<InstIndex> Corpus::find_institution(std::string_view id) const {
  const auto it = inst_lookup_.find(std::string(id));
  if (it == inst_lookup_.end()) return std::nullopt;
  return it->second;
}

bool Corpus::share_institution(PubIndex a, PubIndex b) const {
  const auto& x = pubs_[raw(a)].institutions;
  const auto& y = pubs_[raw(b)].institutions;
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

PublicationSet Corpus::all() const {
  std::vector<PubIndex> v(pubs_.size());
  for (std::uint32_t i = 0; i < v.size(); ++i) v[i] = PubIndex{i};
  return PublicationSet(std::move(v));
}

// ---------------------------------------------------------------- CorpusBuilder

void CorpusBuilder::add_journal(std::string_view issn, std::string name, std::vector<FieldCode> codes) {
  JournalRecord rec;
  rec.issn = normalize_issn(issn);
  rec.name = std::move(name);
  if (codes.empty()) throw DomainError("journal " + display_issn(rec.issn) + " has no FoR code");
  for (auto& c : codes) {
    if (!rec.carries(c)) rec.for_codes.push_back(std::move(c));
  }
  if (journal_lookup_.count(rec.issn)) throw DuplicateIdError("journal", display_issn(rec.issn));
  journal_lookup_.emplace(rec.issn, static_cast<std::uint32_t>(journals_.size()));
  journals_.push_back(std::move(rec));
}

InstIndex CorpusBuilder::intern_institution(const std::string& id) {
  if (auto it = inst_lookup_.find(id); it != inst_lookup_.end()) return it->second;
  const InstIndex idx{static_cast<std::uint32_t>(institutions_.size())};
  institutions_.push_back(Institution{id, {}, {}, std::nullopt});
  inst_declared_.push_back(false);
  inst_lookup_.emplace(id, idx);
  return idx;
}

void CorpusBuilder::add_institution(Institution inst) {
  if (inst.id.empty()) throw DomainError("institution id must not be empty");
  if (inst.staff_count && *inst.staff_count == 0) throw DomainError("staff_count must be positive for " + inst.id);
  const InstIndex idx = intern_institution(inst.id);
  if (inst_declared_[raw(idx)]) throw DuplicateIdError("institution", inst.id);
  inst_declared_[raw(idx)] = true;
  institutions_[raw(idx)] = std::move(inst);
}

std::uint32_t CorpusBuilder::intern_pub_name(std::string_view id) {
  std::string key(id);
  if (auto it = name_lookup_.find(key); it != name_lookup_.end()) return it->second;
  const auto n = static_cast<std::uint32_t>(names_.size());
  names_.push_back(key);
  name_lookup_.emplace(std::move(key), n);
  return n;
}

void CorpusBuilder::add_publication(PublicationInput in) {
  if (in.id.empty()) throw DomainError("publication id must not be empty");
  if (pub_lookup_.count(in.id)) throw DuplicateIdError("publication", in.id);
  if (in.year < kMinYear || in.year > kMaxYear) {
    throw DomainError("publication \"" + in.id + "\" has year " + std::to_string(in.year) + " outside [" +
                      std::to_string(kMinYear) + ", " + std::to_string(kMaxYear) + "]");
  }
  Publication pub;
  pub.id = in.id;
  pub.year = in.year;
  if (in.issn) pub.issn = normalize_issn(*in.issn);
  for (const auto& inst : in.institutions) pub.institutions.push_back(intern_institution(inst));
  std::sort(pub.institutions.begin(), pub.institutions.end());
  pub.institutions.erase(std::unique(pub.institutions.begin(), pub.institutions.end()), pub.institutions.end());
  for (auto& kw : in.keywords) {
    std::transform(kw.begin(), kw.end(), kw.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    pub.keywords.push_back(std::move(kw));
  }
  std::sort(pub.keywords.begin(), pub.keywords.end());
  pub.keywords.erase(std::unique(pub.keywords.begin(), pub.keywords.end()), pub.keywords.end());
  pub_lookup_.emplace(pub.id, static_cast<std::uint32_t>(pubs_.size()));
  pubs_.push_back(std::move(pub));
}

void CorpusBuilder::add_citation(std::string_view citing, std::string_view cited) {
  if (citing.empty() || cited.empty()) throw DomainError("citation endpoints must not be empty");
  if (citing == cited) throw DomainError("publication \"" + std::string(citing) + "\" cites itself");
  edges_.emplace_back(intern_pub_name(citing), intern_pub_name(cited));
}

bool CorpusBuilder::has_publication(std::string_view id) const { return pub_lookup_.count(std::string(id)) != 0; }

Corpus CorpusBuilder::build() && {
  Corpus c;
  // Dangling endpoints become bare external publications, appended in id order.
  std::vector<std::string> dangling;
  for (const auto& name : names_) {
    if (!pub_lookup_.count(name)) dangling.push_back(name);
  }
  std::sort(dangling.begin(), dangling.end());
  for (auto& name : dangling) {
    Publication ext;
    ext.id = name;
    ext.external = true;
    pub_lookup_.emplace(name, static_cast<std::uint32_t>(pubs_.size()));
    pubs_.push_back(std::move(ext));
  }

  std::vector<std::uint32_t> name_to_pub(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) name_to_pub[i] = pub_lookup_.at(names_[i]);
  for (auto& [a, b] : edges_) {
    a = name_to_pub[a];
    b = name_to_pub[b];
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  const std::size_t n = pubs_.size();
  c.out_offsets_.assign(n + 1, 0);
  c.in_offsets_.assign(n + 1, 0);
  for (const auto& [a, b] : edges_) {
    ++c.out_offsets_[a + 1];
    ++c.in_offsets_[b + 1];
  }
  std::partial_sum(c.out_offsets_.begin(), c.out_offsets_.end(), c.out_offsets_.begin());
  std::partial_sum(c.in_offsets_.begin(), c.in_offsets_.end(), c.in_offsets_.begin());
  c.out_targets_.resize(edges_.size());
  c.in_targets_.resize(edges_.size());
  std::vector<std::uint32_t> in_fill(c.in_offsets_.begin(), c.in_offsets_.end() - 1);
  // edges_ is sorted by (citing, cited): out lists come out ascending, and
  // in lists are filled in ascending citing order as well.
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [a, b] = edges_[e];
    c.out_targets_[e] = PubIndex{b};
    c.in_targets_[in_fill[b]++] = PubIndex{a};
  }

  c.pubs_ = std::move(pubs_);
  for (std::uint32_t i = 0; i < c.pubs_.size(); ++i) c.pub_lookup_.emplace(c.pubs_[i].id, PubIndex{i});
  c.journals_ = std::move(journals_);
  c.journal_lookup_ = std::move(journal_lookup_);
  c.institutions_ = std::move(institutions_);
  c.inst_lookup_ = std::move(inst_lookup_);
  return c;
}

}  // namespace scholimetric
