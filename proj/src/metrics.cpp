#include "scholimetric/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scholimetric {

namespace {

bool edge_passes(const Corpus& corpus, const MetricOptions& options, PubIndex citing, PubIndex cited) {
  if (options.citing_year_max) {
    const auto& year = corpus.publication(citing).year;
    if (!year || *year > *options.citing_year_max) return false;
  }
  if (options.exclude_self_citations && corpus.share_institution(citing, cited)) return false;
  return true;
}

}  // namespace

std::uint32_t hirsch(std::span<const std::uint32_t> values) {
  const std::size_t n = values.size();
  // tally[k] = number of values v with min(v, n) == k
  std::vector<std::uint32_t> tally(n + 1, 0);
  for (auto v : values) ++tally[std::min<std::size_t>(v, n)];
  std::size_t at_least = 0;
  for (std::size_t k = n; k > 0; --k) {
    at_least += tally[k];
    if (at_least >= k) return static_cast<std::uint32_t>(k);
  }
  return 0;
}

IndexValue h_index(std::span<const KeyedValue> items) {
  std::vector<std::uint32_t> values;
  values.reserve(items.size());
  for (const auto& it : items) values.push_back(it.value);
  IndexValue out;
  out.value = hirsch(values);
  if (out.value == 0) return out;

  std::vector<const KeyedValue*> order;
  order.reserve(items.size());
  for (const auto& it : items) order.push_back(&it);
  const auto better = [](const KeyedValue* a, const KeyedValue* b) {
    if (a->value != b->value) return a->value > b->value;
    return a->key < b->key;
  };
  std::partial_sort(order.begin(), order.begin() + out.value, order.end(), better);
  out.core.reserve(out.value);
  for (std::uint32_t k = 0; k < out.value; ++k) out.core.emplace_back(order[k]->key);
  return out;
}

CitationIndex::CitationIndex(const Corpus& corpus, MetricOptions options)
    : corpus_(&corpus), options_(options), counts_(corpus.size(), 0) {
  for (std::uint32_t i = 0; i < corpus.size(); ++i) {
    const PubIndex cited{i};
    std::uint32_t n = 0;
    for (auto citing : corpus.cited_by(cited)) n += counts_edge(citing, cited) ? 1 : 0;
    counts_[i] = n;
  }
}

bool CitationIndex::counts_edge(PubIndex citing, PubIndex cited) const {
  return edge_passes(*corpus_, options_, citing, cited);
}

std::uint32_t CitationIndex::single_publication_h(PubIndex p) const {
  std::vector<std::uint32_t> tier;
  const auto citers = corpus_->cited_by(p);
  tier.reserve(citers.size());
  for (auto q : citers) {
    if (counts_edge(q, p)) tier.push_back(counts_[raw(q)]);
  }
  return hirsch(tier);
}

IndexValue CitationIndex::single_publication_h_core(PubIndex p) const {
  std::vector<KeyedValue> tier;
  for (auto q : corpus_->cited_by(p)) {
    if (counts_edge(q, p)) tier.push_back({corpus_->id_of(q), counts_[raw(q)]});
  }
  return h_index(tier);
}

IndexValue CitationIndex::hirsch_of_set(const PublicationSet& pubs) const {
  std::vector<KeyedValue> items;
  items.reserve(pubs.size());
  for (auto p : pubs) items.push_back({corpus_->id_of(p), counts_[raw(p)]});
  return h_index(items);
}

IndexValue CitationIndex::indirect_h2(const PublicationSet& pubs) const {
  std::vector<KeyedValue> items;
  items.reserve(pubs.size());
  for (auto p : pubs) items.push_back({corpus_->id_of(p), single_publication_h(p)});
  return h_index(items);
}

std::uint32_t citation_count(const Corpus& corpus, std::string_view pub_id, const MetricOptions& options) {
  const PubIndex p = corpus.index_of(pub_id);
  std::uint32_t n = 0;
  for (auto q : corpus.cited_by(p)) n += edge_passes(corpus, options, q, p) ? 1 : 0;
  return n;
}

IndexValue hirsch_of_set(const Corpus& corpus, const PublicationSet& pubs, const MetricOptions& options) {
  return CitationIndex(corpus, options).hirsch_of_set(pubs);
}

IndexValue single_publication_h(const Corpus& corpus, std::string_view pub_id, const MetricOptions& options) {
  const PubIndex p = corpus.index_of(pub_id);
  return CitationIndex(corpus, options).single_publication_h_core(p);
}

IndexValue indirect_h2(const Corpus& corpus, const PublicationSet& pubs, const MetricOptions& options) {
  return CitationIndex(corpus, options).indirect_h2(pubs);
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DomainError("correlation needs equal lengths, got " + std::to_string(xs.size()) + " and " +
                      std::to_string(ys.size()));
  }
  if (xs.size() < 2) throw DomainError("correlation needs at least 2 points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DomainError("correlation undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace scholimetric
