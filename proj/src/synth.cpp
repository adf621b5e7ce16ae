#include "scholimetric/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <unordered_set>

#include <fmt/format.h>

namespace scholimetric {

namespace {

// std::mt19937_64's output sequence is fixed by the standard; the standard
// distributions are not, so the few we need are spelled out here.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % n;
    }
  }

  double unit_open() {  // (0, 1]
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    const double r = std::sqrt(-2.0 * std::log(unit_open()));
    return r * std::cos(2.0 * std::numbers::pi * unit_open());
  }

 private:
  std::mt19937_64 engine_;
};

std::string synthetic_issn(int prefix, int seq) {
  const std::string digits = fmt::format("{:04d}{:03d}", prefix, seq);
  int total = 0;
  for (int i = 0; i < 7; ++i) total += (digits[i] - '0') * (8 - i);
  const int check = (11 - total % 11) % 11;
  return digits + (check == 10 ? std::string("X") : std::to_string(check));
}

struct SynthJournal {
  int prefix;
  int seq;
  const char* name;
  std::vector<const char*> codes;
};

const std::vector<SynthJournal>& synthetic_journals() {
  static const std::vector<SynthJournal> journals = {
      {705, 901, "Synthetic Forest Ecology", {"0705"}},
      {705, 902, "Synthetic Forest Science", {"0705"}},
      {705, 903, "Synthetic Silviculture", {"0705"}},
      {705, 904, "Synthetic Wood Science", {"0705"}},
      {705, 905, "Synthetic Forest Policy", {"0705"}},
      {705, 906, "Synthetic Tree Physiology", {"0705"}},
      {705, 907, "Synthetic Forest Meteorology", {"0401", "0705"}},
      {700, 901, "Synthetic Agricultural Entomology", {"07"}},
      {700, 902, "Synthetic Multidisciplinary Letters", {"MD"}},
      {602, 901, "Synthetic Ecology", {"0602"}},
      {602, 902, "Synthetic Landscape Ecology", {"0602", "0501"}},
      {701, 901, "Synthetic Agronomy", {"0701"}},
  };
  return journals;
}

constexpr const char* kVocabulary[] = {"forestry", "silviculture", "timber", "eucalyptus",
                                       "ecology",  "soil",         "climate"};

}  // namespace

Corpus synthesize_corpus(const SynthSpec& spec) {
  if (spec.n_pubs == 0) throw DomainError("synthetic corpus needs n_pubs > 0");
  Window::make(spec.first_year, spec.last_year, spec.last_year);
  if (!(spec.log_sd >= 0.0) || !std::isfinite(spec.log_mean)) throw DomainError("invalid skew parameters");
  if (spec.n_institutions == 0) throw DomainError("synthetic corpus needs at least one institution");

  PortableRng rng(spec.seed);
  CorpusBuilder builder;

  const auto& journals = synthetic_journals();
  std::vector<std::string> issns;
  for (const auto& j : journals) {
    std::vector<FieldCode> codes;
    for (const char* c : j.codes) codes.emplace_back(c);
    issns.push_back(synthetic_issn(j.prefix, j.seq));
    builder.add_journal(issns.back(), j.name, std::move(codes));
  }
  const int inst_width = static_cast<int>(std::to_string(spec.n_institutions).size());
  std::vector<std::string> inst_ids;
  for (std::uint32_t k = 1; k <= spec.n_institutions; ++k) {
    inst_ids.push_back(fmt::format("inst-{:0{}d}", k, inst_width));
    builder.add_institution(Institution{inst_ids.back(), fmt::format("Synthetic Institution {}", k), "", std::nullopt});
  }

  const std::uint32_t n = spec.n_pubs;
  const int id_width = static_cast<int>(std::to_string(n).size());
  const auto span_years = static_cast<std::uint64_t>(spec.last_year - spec.first_year + 1);
  std::vector<std::string> ids(n);
  std::vector<int> years(n);
  std::vector<std::uint64_t> targets(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    CorpusBuilder::PublicationInput pub;
    ids[i] = fmt::format("syn-{:0{}d}", i + 1, id_width);
    pub.id = ids[i];
    years[i] = spec.first_year + static_cast<int>(rng.below(span_years));
    pub.year = years[i];
    if (rng.below(10) != 0) pub.issn = issns[rng.below(issns.size())];
    const auto n_inst = std::min<std::uint64_t>(rng.below(3), spec.n_institutions);
    while (pub.institutions.size() < n_inst) {
      const auto& inst = inst_ids[rng.below(inst_ids.size())];
      if (std::find(pub.institutions.begin(), pub.institutions.end(), inst) == pub.institutions.end()) {
        pub.institutions.push_back(inst);
      }
    }
    const auto n_kw = rng.below(3);
    for (std::uint64_t k = 0; k < n_kw; ++k) pub.keywords.emplace_back(kVocabulary[rng.below(std::size(kVocabulary))]);
    const double draw = std::floor(std::exp(spec.log_mean + spec.log_sd * rng.normal()));
    targets[i] = draw >= 1e9 ? 1'000'000'000ULL : static_cast<std::uint64_t>(draw);
    builder.add_publication(std::move(pub));
  }

  // Citers of a publication are drawn from publications of the same or a later year.
  std::vector<std::uint32_t> by_year(n);
  for (std::uint32_t i = 0; i < n; ++i) by_year[i] = i;
  std::stable_sort(by_year.begin(), by_year.end(), [&](std::uint32_t a, std::uint32_t b) { return years[a] < years[b]; });
  std::vector<std::uint32_t> position(n);
  for (std::uint32_t k = 0; k < n; ++k) position[by_year[k]] = k;

  std::unordered_set<std::uint64_t> chosen;
  std::vector<std::uint64_t> picks;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto first = static_cast<std::uint64_t>(
        std::lower_bound(by_year.begin(), by_year.end(), years[i],
                         [&](std::uint32_t a, int y) { return years[a] < y; }) -
        by_year.begin());
    const std::uint64_t pool = n - first - 1;  // self excluded
    const std::uint64_t k = std::min(targets[i], pool);
    if (k == 0) continue;
    // Floyd's sampling of k distinct offsets in [0, pool)
    chosen.clear();
    for (std::uint64_t j = pool - k; j < pool; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    picks.assign(chosen.begin(), chosen.end());
    std::sort(picks.begin(), picks.end());
    const std::uint64_t self_offset = position[i] - first;
    for (auto off : picks) {
      const std::uint64_t pos = first + (off < self_offset ? off : off + 1);
      builder.add_citation(ids[by_year[pos]], ids[i]);
    }
  }
  return std::move(builder).build();
}

}  // namespace scholimetric
