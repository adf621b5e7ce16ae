#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scholimetric/corpus.hpp"

namespace scholimetric {

struct MetricOptions {
  /// Drop citing publications that share an institution with the cited one.
  bool exclude_self_citations = false;
  /// Ignore citing publications published after this year. Citing
  /// publications of unknown year are ignored whenever a cap is set.
  std::optional<int> citing_year_max;
};

/// Value of a Hirsch-type index together with the items certifying it.
struct IndexValue {
  std::uint32_t value = 0;
  /// `value` publication ids, highest underlying value first, ties by id.
  std::vector<std::string> core;
};

/// Plain Hirsch index: the largest n such that at least n values are >= n.
std::uint32_t hirsch(std::span<const std::uint32_t> values);

struct KeyedValue {
  std::string_view key;
  std::uint32_t value = 0;
};

/// Hirsch index over keyed values; the core keeps the `value` largest items,
/// breaking ties by key.
IndexValue h_index(std::span<const KeyedValue> items);

/// Per-publication citation counts of a snapshot under fixed options.
/// Counts are corpus-global: every publication in the snapshot is a potential
/// citer, whatever set is being evaluated.
class CitationIndex {
 public:
  CitationIndex(const Corpus& corpus, MetricOptions options);

  const Corpus& corpus() const noexcept { return *corpus_; }
  const MetricOptions& options() const noexcept { return options_; }

  /// Distinct citing publications of `p` passing the option filters.
  std::uint32_t count(PubIndex p) const { return counts_[raw(p)]; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }

  /// Whether the edge citing -> cited survives the option filters.
  bool counts_edge(PubIndex citing, PubIndex cited) const;

  /// Hirsch index of the citation counts of `p`'s citing publications.
  std::uint32_t single_publication_h(PubIndex p) const;
  IndexValue single_publication_h_core(PubIndex p) const;

  IndexValue hirsch_of_set(const PublicationSet& pubs) const;
  IndexValue indirect_h2(const PublicationSet& pubs) const;

 private:
  const Corpus* corpus_;
  MetricOptions options_;
  std::vector<std::uint32_t> counts_;
};

// Convenience entry points. Each builds a CitationIndex; callers evaluating
// many publications should build one index and reuse it.
std::uint32_t citation_count(const Corpus& corpus, std::string_view pub_id, const MetricOptions& options = {});
IndexValue hirsch_of_set(const Corpus& corpus, const PublicationSet& pubs, const MetricOptions& options = {});
IndexValue single_publication_h(const Corpus& corpus, std::string_view pub_id, const MetricOptions& options = {});
IndexValue indirect_h2(const Corpus& corpus, const PublicationSet& pubs, const MetricOptions& options = {});

/// Product-moment correlation. Throws DomainError on length mismatch, fewer
/// than two points, or a constant vector.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace scholimetric
