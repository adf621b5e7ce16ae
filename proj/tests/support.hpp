#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "scholimetric/corpus.hpp"

namespace support {

using namespace scholimetric;

inline std::filesystem::path fixture_dir() { return SCHOLIMETRIC_FIXTURE_DIR; }

inline std::vector<FieldCode> codes(std::string_view text) {
  std::vector<FieldCode> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto stop = std::min(text.find(';', pos), text.size());
    out.emplace_back(text.substr(pos, stop - pos));
    pos = stop + 1;
  }
  return out;
}

// Small corpora written inline in tests.
class Mini {
 public:
  Mini& journal(std::string_view issn, std::string_view for_codes) {
    b_.add_journal(issn, "Journal " + std::string(issn), codes(for_codes));
    return *this;
  }
  Mini& pub(std::string id, int year, std::string issn = "", std::vector<std::string> insts = {},
            std::vector<std::string> keywords = {}) {
    CorpusBuilder::PublicationInput in;
    in.id = std::move(id);
    in.year = year;
    if (!issn.empty()) in.issn = std::move(issn);
    in.institutions = std::move(insts);
    in.keywords = std::move(keywords);
    b_.add_publication(std::move(in));
    return *this;
  }
  Mini& cite(std::string_view from, std::string_view to) {
    b_.add_citation(from, to);
    return *this;
  }
  // `n` fresh year-`year` publications citing `to`.
  Mini& cited_times(std::string_view to, int n, int year = 2011) {
    for (int k = 0; k < n; ++k) {
      const std::string id = std::string(to) + "-c" + std::to_string(k);
      pub(id, year);
      cite(id, to);
    }
    return *this;
  }
  Corpus build() { return std::move(b_).build(); }

 private:
  CorpusBuilder b_;
};

inline PublicationSet set_of(const Corpus& c, std::initializer_list<std::string_view> ids) {
  std::vector<PubIndex> v;
  for (auto id : ids) v.push_back(c.index_of(id));
  return PublicationSet(std::move(v));
}

inline PublicationSet set_of(const Corpus& c, const std::vector<std::string>& ids) {
  std::vector<PubIndex> v;
  for (const auto& id : ids) v.push_back(c.index_of(id));
  return PublicationSet(std::move(v));
}

}  // namespace support
