#pragma once

#include <cstdint>

#include "scholimetric/corpus.hpp"

namespace scholimetric {

/// Parameters of a synthetic corpus. Citation counts are floor(exp(N(mu, sigma)))
/// draws realized as edges from publications of the same or a later year.
struct SynthSpec {
  std::uint32_t n_pubs = 1000;
  int first_year = 2005;
  int last_year = 2010;
  double log_mean = 1.5;   // mu of the underlying normal
  double log_sd = 1.0;     // sigma of the underlying normal
  std::uint32_t n_institutions = 20;
  std::uint64_t seed = 0;
};

/// Deterministic for a given spec: the same spec yields the same corpus on
/// every run and platform. Throws DomainError when n_pubs is 0 or the years
/// are out of range.
Corpus synthesize_corpus(const SynthSpec& spec);

}  // namespace scholimetric
