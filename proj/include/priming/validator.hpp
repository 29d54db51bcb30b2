#pragma once

#include <optional>
#include <string>
#include <vector>

#include "priming/condition.hpp"
#include "priming/generator.hpp"
#include "priming/lexicon.hpp"

namespace priming {

struct Violation {
    std::string constraint;          // e.g. "verb_disjoint", "association"
    std::vector<std::string> words;  // offending lemmas or surface strings
    int pair_index = -1;             // -1 for item-level problems

    std::string describe() const;
};

// Independent checker for one item under `cond`. Re-derives every constraint
// from the lexicon; an empty result means the item is valid. When `structure`
// is given the target must have that construction.
std::vector<Violation> validate_pair(const PrimeTargetItem& item, const ConditionSpec& cond, const Lexicon& lex,
                                     std::optional<Construction> structure = std::nullopt);

}  // namespace priming
