#include "priming/sentence.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace priming {

namespace {

constexpr std::array<std::string_view, 7> kAnExceptions = {"hour", "honest", "honor", "heir", "herb", "honour", "hourly"};
constexpr std::array<std::string_view, 19> kAExceptions = {
    "one",   "once",     "unit",  "union",    "unique",  "uniform",  "university", "user",    "useful", "useless",
    "usual", "utensil",  "euro",  "european", "ewe",     "unicorn",  "universe",   "utility", "ukulele"};

bool contains(auto const& list, std::string_view w) { return std::find(list.begin(), list.end(), w) != list.end(); }

std::string capitalized(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

const CategorySet kWithCategories{Category::Clothing, Category::Device, Category::Container};

class Builder {
public:
    Builder(const SentenceSpec& spec, const Lexicon& lex) : spec_(spec), lex_(lex) {}

    Sentence build() {
        check_shape();
        const auto& c = spec_.construction;
        if (c == Construction::INTR_PAD) {
            word(*spec_.pronoun);
            function(*spec_.auxiliary);
            word(verb_->lemma);
            out_.content_lemmas.insert(verb_->lemma);
            return finish();
        }
        out_.content_lemmas.insert(verb_->lemma);
        switch (c) {
            case Construction::ACT:
                np(Role::Agent, spec_.agent);
                word(spec_.tense == Tense::Present ? verb_->third_singular : verb_->past);
                np(Role::Patient, spec_.patient);
                break;
            case Construction::PASS:
                np(Role::Patient, spec_.patient);
                function(spec_.tense == Tense::Present ? "is" : "was");
                word(verb_->past_participle);
                function("by");
                np(Role::Agent, spec_.agent);
                break;
            case Construction::DO:
                np(Role::Agent, spec_.agent);
                word(verb_->past);
                np(Role::Recipient, *spec_.recipient);
                np(Role::Patient, spec_.patient);
                break;
            case Construction::PO:
                np(Role::Agent, spec_.agent);
                word(verb_->past);
                np(Role::Patient, spec_.patient);
                function(*verb_->po_preposition);
                np(Role::Recipient, *spec_.recipient);
                break;
            case Construction::INTR_PAD: break;
        }
        return finish();
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw RealizationError(std::string(to_string(spec_.construction)) + " '" + spec_.verb + "': " + msg);
    }

    void check_shape() {
        verb_ = lex_.find_verb(spec_.verb);
        if (!verb_) fail("unknown verb");
        const auto c = spec_.construction;
        if (c == Construction::INTR_PAD) {
            if (verb_->kind != VerbKind::IntransitivePadding) fail("padding sentence needs an intransitive_padding verb");
            if (!spec_.pronoun || !spec_.auxiliary) fail("padding sentence needs a pronoun and an auxiliary");
            return;
        }
        if (spec_.pronoun || spec_.auxiliary) fail("pronoun/auxiliary slots are for padding sentences only");
        if (is_dative(c)) {
            if (verb_->kind != VerbKind::Ditransitive) fail("dative construction needs a ditransitive verb");
            if (!spec_.recipient) fail("dative construction needs a recipient");
            if (spec_.tense != Tense::Past) fail("dative sentences are past tense");
            if (verb_->past.empty()) fail("missing past form");
        } else {
            if (verb_->kind != VerbKind::Transitive) fail("transitive construction needs a transitive verb");
            if (spec_.recipient) fail("transitive construction takes no recipient");
            const auto& form = c == Construction::PASS ? verb_->past_participle
                               : spec_.tense == Tense::Present ? verb_->third_singular
                                                               : verb_->past;
            if (form.empty()) fail("missing inflected form");
        }
        int complex_count = 0;
        std::set<std::string> nouns;
        for (const auto& [role, np] : spec_.roles()) {
            if (np->complex()) ++complex_count;
            if (!nouns.insert(np->noun).second) fail("noun '" + np->noun + "' occurs twice");
            if (np->pp && !nouns.insert(np->pp->noun).second) fail("noun '" + np->pp->noun + "' occurs twice");
        }
        if (complex_count > 1) fail("more than one complex noun phrase");
    }

    void np(Role role, const NounPhraseSpec& p) {
        const auto* noun = lex_.find_noun(p.noun);
        if (!noun) fail("unknown noun '" + p.noun + "'");
        if (noun->categories.contains(Category::Country)) fail("country '" + p.noun + "' cannot head a role NP");
        if (!spec_.implausible && !noun->categories.intersects(verb_->role_categories(role)))
            fail(std::string(to_string(role)) + " '" + p.noun + "' violates the verb's selectional restrictions");
        determiner(p.determiner, p.adjective ? *p.adjective : p.noun);
        if (p.adjective) adjective(*p.adjective, *noun);
        word(p.noun);
        out_.content_lemmas.insert(p.noun);
        if (p.pp) pp(*p.pp);
    }

    void pp(const PrepPhrase& pp) {
        const auto* noun = lex_.find_noun(pp.noun);
        if (!noun) fail("unknown noun '" + pp.noun + "'");
        out_.content_lemmas.insert(pp.noun);
        if (pp.kind == PrepPhrase::Kind::From) {
            if (!noun->categories.contains(Category::Country)) fail("'" + pp.noun + "' is not a country");
            if (pp.adjective) fail("from-phrases take no adjective");
            function("from");
            word(capitalized(pp.noun));
            return;
        }
        if (!noun->categories.subset_of(kWithCategories)) fail("'" + pp.noun + "' is not a with-phrase noun");
        function("with");
        determiner(pp.determiner, pp.adjective ? *pp.adjective : pp.noun);
        if (pp.adjective) adjective(*pp.adjective, *noun);
        word(pp.noun);
    }

    void adjective(const std::string& lemma, const NounEntry& noun) {
        const auto* a = lex_.find_adjective(lemma);
        if (!a) fail("unknown adjective '" + lemma + "'");
        if (!a->compatible_categories.intersects(noun.categories))
            fail("adjective '" + lemma + "' is incompatible with '" + noun.lemma + "'");
        word(lemma);
        out_.content_lemmas.insert(lemma);
    }

    void determiner(Determiner d, std::string_view next) { function(d == Determiner::The ? "the" : indefinite_article(next)); }

    void function(std::string_view w) {
        out_.function_words.emplace(w);
        word(w);
    }

    void word(std::string_view w) {
        if (!out_.text.empty()) out_.text += ' ';
        out_.text += w;
    }

    Sentence finish() {
        out_.text = capitalized(std::move(out_.text));
        out_.spec = spec_;
        return std::move(out_);
    }

    const SentenceSpec& spec_;
    const Lexicon& lex_;
    const VerbEntry* verb_ = nullptr;
    Sentence out_;
};

}  // namespace

std::string_view to_string(NpShape s) {
    switch (s) {
        case NpShape::Simple: return "simple";
        case NpShape::Adjective: return "adjective";
        case NpShape::PP: return "pp";
        case NpShape::AdjectivePP: return "adjective_pp";
    }
    return "simple";
}

std::optional<NpShape> parse_np_shape(std::string_view s) {
    for (auto v : {NpShape::Simple, NpShape::Adjective, NpShape::PP, NpShape::AdjectivePP})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

NpShape np_shape(const NounPhraseSpec& np) {
    if (np.adjective && np.pp) return NpShape::AdjectivePP;
    if (np.adjective) return NpShape::Adjective;
    if (np.pp) return NpShape::PP;
    return NpShape::Simple;
}

std::vector<std::pair<Role, const NounPhraseSpec*>> SentenceSpec::roles() const {
    std::vector<std::pair<Role, const NounPhraseSpec*>> out;
    if (construction == Construction::INTR_PAD) return out;
    out.emplace_back(Role::Agent, &agent);
    out.emplace_back(Role::Patient, &patient);
    if (recipient) out.emplace_back(Role::Recipient, &*recipient);
    return out;
}

const NounPhraseSpec* SentenceSpec::role(Role r) const {
    if (construction == Construction::INTR_PAD) return nullptr;
    switch (r) {
        case Role::Agent: return &agent;
        case Role::Patient: return &patient;
        case Role::Recipient: return recipient ? &*recipient : nullptr;
    }
    return nullptr;
}

NounPhraseSpec* SentenceSpec::role(Role r) { return const_cast<NounPhraseSpec*>(std::as_const(*this).role(r)); }

std::string_view indefinite_article(std::string_view word) {
    if (word.empty()) return "a";
    if (contains(kAnExceptions, word)) return "an";
    if (contains(kAExceptions, word)) return "a";
    switch (std::tolower(static_cast<unsigned char>(word.front()))) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u': return "an";
        default: return "a";
    }
}

Sentence realize(const SentenceSpec& spec, const Lexicon& lex) { return Builder(spec, lex).build(); }

SentenceSpec alternate(const SentenceSpec& spec) {
    if (spec.construction == Construction::INTR_PAD)
        throw std::invalid_argument("padding sentences have no alternate");
    SentenceSpec out = spec;
    out.construction = counterpart(spec.construction);
    return out;
}

std::set<std::string> content_lemmas(const SentenceSpec& spec) {
    std::set<std::string> out;
    out.insert(spec.verb);
    for (const auto& [role, np] : spec.roles()) {
        out.insert(np->noun);
        if (np->adjective) out.insert(*np->adjective);
        if (np->pp) {
            out.insert(np->pp->noun);
            if (np->pp->adjective) out.insert(*np->pp->adjective);
        }
    }
    return out;
}

std::string format_context(const std::vector<Sentence>& sentences) {
    std::string out;
    for (const auto& s : sentences) {
        if (!out.empty()) out += ' ';
        out += s.text;
        out += '.';
    }
    return out;
}

std::string format_target(const Sentence& s) { return s.text + "."; }

}  // namespace priming
