#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scholimetric/corpus.hpp"

namespace scholimetric {

/// How journal FoR codes restrict a field selection.
enum class EligibilityMode {
  Strict,    // journals carrying the field code
  Implicit,  // strict plus division-coded and MD journals
  All,       // no journal restriction
};

EligibilityMode parse_eligibility(std::string_view text);
std::string_view to_string(EligibilityMode mode);

struct SelectionFilter {
  std::vector<std::string> institutions;  // empty: any institution
  std::optional<FieldCode> field;
  Window window;
  EligibilityMode eligibility = EligibilityMode::Strict;
};

/// Publications with a year inside the window that match every predicate.
/// Unknown institutions and fields absent from the registry are errors; an
/// empty result is not.
PublicationSet select(const Corpus& corpus, const SelectionFilter& filter);

}  // namespace scholimetric
