#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "priming/lexicon.hpp"
#include "priming/types.hpp"

namespace priming {

class RealizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PrepPhrase {
    enum class Kind : std::uint8_t { With, From };
    Kind kind = Kind::With;
    Determiner determiner = Determiner::The;  // with-PP only
    std::optional<std::string> adjective;     // with-PP only
    std::string noun;                         // with-noun or country

    friend bool operator==(const PrepPhrase&, const PrepPhrase&) = default;
};

struct NounPhraseSpec {
    std::string noun;
    Determiner determiner = Determiner::The;
    std::optional<std::string> adjective;
    std::optional<PrepPhrase> pp;

    bool complex() const { return adjective.has_value() || pp.has_value(); }
    friend bool operator==(const NounPhraseSpec&, const NounPhraseSpec&) = default;
};

enum class NpShape : std::uint8_t { Simple, Adjective, PP, AdjectivePP };

std::string_view to_string(NpShape s);
std::optional<NpShape> parse_np_shape(std::string_view s);
NpShape np_shape(const NounPhraseSpec& np);

struct SentenceSpec {
    Construction construction = Construction::ACT;
    std::string verb;
    Tense tense = Tense::Past;
    NounPhraseSpec agent;
    NounPhraseSpec patient;
    std::optional<NounPhraseSpec> recipient;
    std::optional<std::string> pronoun;    // INTR_PAD only
    std::optional<std::string> auxiliary;  // INTR_PAD only
    bool implausible = false;              // roles may violate selectional restrictions

    // Role NPs in agent, patient, recipient order; empty for padding.
    std::vector<std::pair<Role, const NounPhraseSpec*>> roles() const;
    const NounPhraseSpec* role(Role r) const;
    NounPhraseSpec* role(Role r);

    friend bool operator==(const SentenceSpec&, const SentenceSpec&) = default;
};

struct Sentence {
    SentenceSpec spec;
    std::string text;  // capitalized, no terminal period
    std::set<std::string> content_lemmas;
    std::set<std::string> function_words;

    friend bool operator==(const Sentence& a, const Sentence& b) { return a.spec == b.spec && a.text == b.text; }
};

// "a" or "an" for a lowercase head word.
std::string_view indefinite_article(std::string_view word);

Sentence realize(const SentenceSpec& spec, const Lexicon& lex);

// ACT<->PASS, DO<->PO, same content and tense.
SentenceSpec alternate(const SentenceSpec& spec);

// Nouns, verb, adjectives, with-nouns and countries of a spec.
std::set<std::string> content_lemmas(const SentenceSpec& spec);

// Context string: sentences joined by ". " with a final period; "" for none.
std::string format_context(const std::vector<Sentence>& sentences);
std::string format_target(const Sentence& s);

}  // namespace priming
