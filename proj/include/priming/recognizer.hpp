#pragma once

#include <optional>
#include <string_view>

#include "priming/lexicon.hpp"
#include "priming/types.hpp"

namespace priming {

// Template-level parser: recovers the construction of a realized sentence from
// its surface text alone. Returns nullopt when no template matches the whole
// string. A trailing period is ignored.
std::optional<Construction> recognize(std::string_view text, const Lexicon& lex);

}  // namespace priming
