#include "scholimetric/select.hpp"

#include <algorithm>

#include "scholimetric/classification.hpp"

namespace scholimetric {

EligibilityMode parse_eligibility(std::string_view text) {
  if (text == "strict") return EligibilityMode::Strict;
  if (text == "implicit") return EligibilityMode::Implicit;
  if (text == "all") return EligibilityMode::All;
  throw DomainError("eligibility must be strict, implicit or all, got \"" + std::string(text) + "\"");
}

std::string_view to_string(EligibilityMode mode) {
  switch (mode) {
    case EligibilityMode::Strict: return "strict";
    case EligibilityMode::Implicit: return "implicit";
    case EligibilityMode::All: return "all";
  }
  return "?";
}

PublicationSet select(const Corpus& corpus, const SelectionFilter& filter) {
  std::vector<InstIndex> wanted;
  for (const auto& id : filter.institutions) {
    const auto idx = corpus.find_institution(id);
    if (!idx) throw UnknownIdError("institution", id);
    wanted.push_back(*idx);
  }
  std::sort(wanted.begin(), wanted.end());
  if (filter.field) {
    if (!filter.field->is_group()) throw DomainError("field must be a 4-digit FoR code, got \"" + filter.field->str() + "\"");
    if (!corpus.knows_field(*filter.field)) throw UnknownIdError("field", filter.field->str());
  }

  std::vector<PubIndex> out;
  for (std::uint32_t i = 0; i < corpus.size(); ++i) {
    const Publication& pub = corpus.publication(PubIndex{i});
    if (!pub.year || !filter.window.contains(*pub.year)) continue;
    if (!wanted.empty()) {
      const bool member = std::any_of(pub.institutions.begin(), pub.institutions.end(), [&](InstIndex x) {
        return std::binary_search(wanted.begin(), wanted.end(), x);
      });
      if (!member) continue;
    }
    if (filter.field && filter.eligibility != EligibilityMode::All) {
      const Bucket b = classify_journal(corpus.journal_of(PubIndex{i}), *filter.field);
      const bool ok = b == Bucket::Explicit || (filter.eligibility == EligibilityMode::Implicit && b == Bucket::Implicit);
      if (!ok) continue;
    }
    out.push_back(PubIndex{i});
  }
  return PublicationSet(std::move(out));
}

}  // namespace scholimetric
