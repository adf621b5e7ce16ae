#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>

#include "scholimetric/corpus.hpp"

namespace scholimetric {

/// Where a publication stands with respect to one target FoR code.
enum class Bucket {
  Explicit,  // journal carries the target code
  Implicit,  // journal carries the target's 2-digit division or MD, not the target
  Excluded,  // listed journal carrying neither
  Unlisted,  // no journal, or journal absent from the registry
};

std::string_view to_string(Bucket b);

/// `journal` may be null (unlisted). `target` must be a 4-digit group code.
Bucket classify_journal(const JournalRecord* journal, const FieldCode& target);

struct EligibilityPartition {
  PublicationSet explicit_pubs;
  PublicationSet implicit_pubs;
  PublicationSet excluded_pubs;
  PublicationSet unlisted_pubs;

  const PublicationSet& bucket(Bucket b) const;
  std::size_t listed() const { return explicit_pubs.size() + implicit_pubs.size() + excluded_pubs.size(); }
  std::size_t total() const { return listed() + unlisted_pubs.size(); }
};

EligibilityPartition partition(const Corpus& corpus, const PublicationSet& pubs, const FieldCode& target);

/// How many articles a submission for `target` could legitimately contain.
struct SubmissionBounds {
  /// Articles in journals coded with the target code only.
  std::size_t minimal = 0;
  /// Articles in journals carrying the target code, alone or among others.
  std::size_t explicit_total = 0;
  /// explicit_total plus implicitly eligible articles.
  std::size_t maximal = 0;
  /// Denominator for shares: articles in listed journals.
  std::size_t listed = 0;
  std::size_t unlisted = 0;
};

SubmissionBounds submission_bounds(const Corpus& corpus, const PublicationSet& pubs, const FieldCode& target);

/// Reassignment by keyword proxy: `base` plus every candidate whose keywords
/// intersect `keywords`. Throws DomainError on an empty keyword set.
PublicationSet expand_reassignment(const Corpus& corpus, const PublicationSet& base,
                                   const PublicationSet& candidates, const std::set<std::string>& keywords);
/// Same, with every publication in the corpus as a candidate.
PublicationSet expand_reassignment(const Corpus& corpus, const PublicationSet& base,
                                   const std::set<std::string>& keywords);

/// CSV `bucket,count,share`. Shares are relative to listed articles; the
/// trailing rows carry the submission bounds.
void write_partition_report(std::ostream& out, const EligibilityPartition& part, const SubmissionBounds& bounds);

}  // namespace scholimetric
