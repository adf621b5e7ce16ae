#include "scholimetric/classification.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

namespace scholimetric {

std::string_view to_string(Bucket b) {
  switch (b) {
    case Bucket::Explicit: return "explicit";
    case Bucket::Implicit: return "implicit";
    case Bucket::Excluded: return "excluded";
    case Bucket::Unlisted: return "unlisted";
  }
  return "?";
}

Bucket classify_journal(const JournalRecord* journal, const FieldCode& target) {
  if (!target.is_group()) throw DomainError("target field must be a 4-digit FoR code, got \"" + target.str() + "\"");
  if (journal == nullptr) return Bucket::Unlisted;
  if (journal->carries(target)) return Bucket::Explicit;
  for (const auto& code : journal->for_codes) {
    if (code.is_multidisciplinary()) return Bucket::Implicit;
    if (code.is_division() && code.str() == target.division()) return Bucket::Implicit;
  }
  return Bucket::Excluded;
}

const PublicationSet& EligibilityPartition::bucket(Bucket b) const {
  switch (b) {
    case Bucket::Explicit: return explicit_pubs;
    case Bucket::Implicit: return implicit_pubs;
    case Bucket::Excluded: return excluded_pubs;
    case Bucket::Unlisted: break;
  }
  return unlisted_pubs;
}

EligibilityPartition partition(const Corpus& corpus, const PublicationSet& pubs, const FieldCode& target) {
  std::vector<PubIndex> buckets[4];
  for (auto p : pubs) buckets[static_cast<int>(classify_journal(corpus.journal_of(p), target))].push_back(p);
  return EligibilityPartition{PublicationSet(std::move(buckets[0])), PublicationSet(std::move(buckets[1])),
                              PublicationSet(std::move(buckets[2])), PublicationSet(std::move(buckets[3]))};
}

SubmissionBounds submission_bounds(const Corpus& corpus, const PublicationSet& pubs, const FieldCode& target) {
  SubmissionBounds b;
  for (auto p : pubs) {
    const JournalRecord* j = corpus.journal_of(p);
    switch (classify_journal(j, target)) {
      case Bucket::Explicit:
        ++b.explicit_total;
        if (j->for_codes.size() == 1) ++b.minimal;
        ++b.listed;
        break;
      case Bucket::Implicit:
        ++b.maximal;
        ++b.listed;
        break;
      case Bucket::Excluded:
        ++b.listed;
        break;
      case Bucket::Unlisted:
        ++b.unlisted;
        break;
    }
  }
  b.maximal += b.explicit_total;
  return b;
}

PublicationSet expand_reassignment(const Corpus& corpus, const PublicationSet& base, const PublicationSet& candidates,
                                   const std::set<std::string>& keywords) {
  if (keywords.empty()) throw DomainError("reassignment needs at least one keyword");
  std::vector<PubIndex> added;
  for (auto p : candidates) {
    const auto& kws = corpus.publication(p).keywords;
    const bool hit = std::any_of(kws.begin(), kws.end(), [&](const std::string& k) { return keywords.count(k) != 0; });
    if (hit) added.push_back(p);
  }
  return base.unite(PublicationSet(std::move(added)));
}

PublicationSet expand_reassignment(const Corpus& corpus, const PublicationSet& base,
                                   const std::set<std::string>& keywords) {
  return expand_reassignment(corpus, base, corpus.all(), keywords);
}

void write_partition_report(std::ostream& out, const EligibilityPartition& part, const SubmissionBounds& bounds) {
  const double listed = static_cast<double>(part.listed());
  const auto share = [&](std::size_t n) { return listed > 0 ? static_cast<double>(n) / listed : 0.0; };
  out << "bucket,count,share\n";
  for (Bucket b : {Bucket::Explicit, Bucket::Implicit, Bucket::Excluded, Bucket::Unlisted}) {
    const std::size_t n = part.bucket(b).size();
    out << fmt::format("{},{},{:.4f}\n", to_string(b), n, share(n));
  }
  out << fmt::format("minimal,{},{:.4f}\n", bounds.minimal, share(bounds.minimal));
  out << fmt::format("maximal,{},{:.4f}\n", bounds.maximal, share(bounds.maximal));
}

}  // namespace scholimetric
