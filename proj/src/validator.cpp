#include "priming/validator.hpp"

#include <set>

#include "priming/recognizer.hpp"

namespace priming {

namespace {

std::set<std::string> normalized_function_words(const Sentence& s) {
    std::set<std::string> out;
    for (const auto& w : s.function_words) out.insert(w == "an" ? "a" : w);
    return out;
}

int complex_count(const SentenceSpec& s) {
    int n = 0;
    for (const auto& [r, np] : s.roles()) n += np->complex() ? 1 : 0;
    return n;
}

NpShape shape_of(const SentenceSpec& s) {
    for (const auto& [r, np] : s.roles())
        if (np->complex()) return np_shape(*np);
    return NpShape::Simple;
}

class Checker {
public:
    Checker(const PrimeTargetItem& item, const ConditionSpec& cond, const Lexicon& lex)
        : item_(item), cond_(cond), lex_(lex), t_(item.target) {}

    std::vector<Violation> run(std::optional<Construction> structure) {
        if (item_.condition.tag() != cond_.tag()) add("condition", {item_.condition.tag(), cond_.tag()}, -1);
        if (t_.spec.construction == Construction::INTR_PAD ||
            (structure && t_.spec.construction != *structure)) {
            add("structure", {std::string(to_string(t_.spec.construction))}, -1);
            return std::move(out_);
        }
        sentence(t_, -1, false);
        complexity_of_target();
        pair_count();
        std::set<std::set<std::string>> primes;
        for (std::size_t i = 0; i < item_.pairs.size(); ++i) {
            const auto* p = pair(item_.pairs[i], static_cast<int>(i));
            if (p && cond_.kind != ConditionKind::Identical && !primes.insert(p->content_lemmas).second)
                add("prime_distinct", {p->text}, static_cast<int>(i));
        }
        return std::move(out_);
    }

private:
    void add(std::string constraint, std::vector<std::string> words, int pair) {
        out_.push_back(Violation{std::move(constraint), std::move(words), pair});
    }

    bool implausible_condition() const { return cond_.kind == ConditionKind::ImplausiblePrime; }

    void frequency(const std::string& lemma, std::size_t rank, int pair) {
        if (rank > lex_.frequency_cutoff) add("frequency", {lemma, std::to_string(rank)}, pair);
    }

    // Checks that hold for any sentence in its own right.
    void sentence(const Sentence& s, int pair, bool may_be_implausible) {
        try {
            const auto again = realize(s.spec, lex_);
            if (again.text != s.text) add("realization", {s.text, again.text}, pair);
        } catch (const RealizationError& e) {
            add("realization", {s.text, e.what()}, pair);
            return;
        }
        if (content_lemmas(s.spec) != s.content_lemmas) add("realization", {s.text, "content lemma set"}, pair);
        if (recognize(s.text, lex_) != s.spec.construction) add("round_trip", {s.text}, pair);
        if (is_dative(s.spec.construction) && s.spec.tense != Tense::Past) add("dative_tense", {s.text}, pair);

        const auto* verb = lex_.find_verb(s.spec.verb);
        frequency(verb->lemma, verb->frequency_rank, pair);
        auto noun = [&](const std::string& lemma) {
            const auto* n = lex_.find_noun(lemma);
            if (!n->countable) add("countable", {lemma}, pair);
            frequency(lemma, n->frequency_rank, pair);
        };
        auto adjective = [&](const std::string& lemma) {
            frequency(lemma, lex_.find_adjective(lemma)->frequency_rank, pair);
        };
        std::optional<Determiner> det;
        for (const auto& [r, np] : s.spec.roles()) {
            noun(np->noun);
            if (np->adjective) adjective(*np->adjective);
            if (np->pp) {
                noun(np->pp->noun);
                if (np->pp->adjective) adjective(*np->pp->adjective);
                if (np->pp->kind == PrepPhrase::Kind::With && np->pp->determiner != np->determiner)
                    add("determiner", {s.text}, pair);
            }
            if (det && *det != np->determiner) add("determiner", {s.text}, pair);
            det = np->determiner;
            const bool fits = lex_.find_noun(np->noun)->categories.intersects(verb->role_categories(r));
            if (!fits && !may_be_implausible)
                add("selectional_restriction", {std::string(to_string(r)), np->noun, verb->lemma}, pair);
        }
        if (s.spec.implausible && !may_be_implausible) add("implausibility", {s.text, "flagged implausible"}, pair);
    }

    void pair_count() {
        const auto n = item_.pairs.size();
        bool ok = true;
        switch (cond_.kind) {
            case ConditionKind::Identical: ok = n == 1; break;
            case ConditionKind::SemSimAll: ok = n >= 1 && n <= cond_.primes_per_target; break;
            default: ok = n == cond_.primes_per_target;
        }
        if (!ok) add("pair_count", {std::to_string(n)}, -1);
    }

    void complexity_of_target() {
        const int n = complex_count(t_.spec);
        const bool complex_target = cond_.kind == ConditionKind::Complexity && cond_.mode != ComplexityMode::Prime;
        if (n != (complex_target ? 1 : 0)) add("complexity", {t_.text, "target has " + std::to_string(n)}, -1);
    }

    // Returns the prime whose alternate is the incongruent context.
    const Sentence* pair(const PrimePair& p, int i) {
        std::size_t expected = 1;
        if (cond_.kind == ConditionKind::Recency) expected = 4;
        if (cond_.kind == ConditionKind::Cumulative) expected = static_cast<std::size_t>(cond_.k);
        if (p.congruent.size() != expected || p.incongruent.size() != 1) {
            add("context_length",
                {std::to_string(p.congruent.size()) + "+" + std::to_string(p.incongruent.size())}, i);
            return nullptr;
        }

        std::vector<const Sentence*> primes, padding;
        for (std::size_t j = 0; j < p.congruent.size(); ++j) {
            const bool is_prime = cond_.kind != ConditionKind::Recency || static_cast<int>(j) + 1 == cond_.position;
            (is_prime ? primes : padding).push_back(&p.congruent[j]);
        }
        for (const auto* s : primes) {
            if (s->spec.construction != t_.spec.construction) {
                add("structure", {s->text}, i);
                return nullptr;
            }
            sentence(*s, i, implausible_condition());
            relation(*s, i);
        }
        const Sentence& prime = *primes.back();

        const Sentence& inc = p.incongruent.front();
        if (inc.spec.construction == Construction::INTR_PAD || inc.spec != alternate(prime.spec)) {
            add("alternation", {prime.text, inc.text}, i);
        } else {
            sentence(inc, i, implausible_condition() || cond_.kind == ConditionKind::Identical);
        }

        if (cond_.kind == ConditionKind::Cumulative) {
            std::set<std::set<std::string>> seen;
            for (const auto* s : primes)
                if (!seen.insert(s->content_lemmas).second) add("prime_distinct", {s->text, "within context"}, i);
        }
        if (cond_.kind == ConditionKind::Recency) padding_checks(padding, prime, i);
        return &prime;
    }

    void padding_checks(const std::vector<const Sentence*>& padding, const Sentence& prime, int i) {
        std::set<std::string> verbs;
        std::set<std::string> pronouns;
        std::set<std::string> auxiliaries;
        std::set<std::string> core = t_.content_lemmas;
        core.insert(prime.content_lemmas.begin(), prime.content_lemmas.end());
        for (const auto* s : padding) {
            if (s->spec.construction != Construction::INTR_PAD) {
                add("padding", {s->text, "not a padding sentence"}, i);
                continue;
            }
            try {
                if (realize(s->spec, lex_).text != s->text) add("realization", {s->text}, i);
            } catch (const RealizationError& e) {
                add("padding", {s->text, e.what()}, i);
                continue;
            }
            const auto& pr = *s->spec.pronoun;
            const auto& aux = *s->spec.auxiliary;
            if (std::find(lex_.pronouns.begin(), lex_.pronouns.end(), pr) == lex_.pronouns.end())
                add("padding", {pr, "not a padding pronoun"}, i);
            if (std::find(lex_.auxiliaries.begin(), lex_.auxiliaries.end(), aux) == lex_.auxiliaries.end())
                add("padding", {aux, "not a padding auxiliary"}, i);
            if (!verbs.insert(s->spec.verb).second || !pronouns.insert(pr).second || !auxiliaries.insert(aux).second)
                add("padding", {s->text, "repeated within context"}, i);
            for (const auto& w : core)
                if (w == s->spec.verb || is_associated(w, s->spec.verb, lex_))
                    add("padding", {s->spec.verb, w}, i);
            frequency(s->spec.verb, lex_.find_verb(s->spec.verb)->frequency_rank, i);
        }
    }

    // Constraints between one congruent prime and the target.
    void relation(const Sentence& s, int i) {
        const auto kind = cond_.kind;
        if (kind == ConditionKind::Identical) {
            if (s.spec != t_.spec || s.text != t_.text) add("identical", {s.text, t_.text}, i);
            return;
        }
        const auto x = t_.spec.construction;
        const bool same_fw = kind == ConditionKind::OverlapFunctionWords;

        if ((s.spec.agent.determiner == t_.spec.agent.determiner) != same_fw)
            add("determiner", {s.text, t_.text}, i);
        if (!is_dative(x) && (s.spec.tense == t_.spec.tense) != same_fw) add("tense", {s.text, t_.text}, i);
        if (x == Construction::PO) {
            const auto& ps = lex_.find_verb(s.spec.verb)->po_preposition;
            const auto& pt = lex_.find_verb(t_.spec.verb)->po_preposition;
            const bool relaxed = kind == ConditionKind::OverlapVerb || kind == ConditionKind::SemSimVerb ||
                                 kind == ConditionKind::SemSimAll;
            if (same_fw) {
                if (ps != pt) add("function_words", {*ps, *pt}, i);
            } else if (!relaxed && ps == pt) {
                add("preposition", {*ps}, i);
            }
        }
        if (same_fw && normalized_function_words(s) != normalized_function_words(t_))
            add("function_words", {s.text, t_.text}, i);

        // Lemmas the condition allows to be shared, and role-matched pairs exempt
        // from the association check because they must be similar.
        std::set<std::string> allowed;
        std::vector<std::pair<std::string, std::string>> matched;
        const auto roles = t_.spec.roles();
        if (kind == ConditionKind::OverlapRandomNoun || kind == ConditionKind::OverlapAllNouns) {
            std::size_t same_role = 0;
            for (const auto& [r, np] : roles) {
                if (s.spec.role(r)->noun == np->noun) {
                    ++same_role;
                    allowed.insert(np->noun);
                }
            }
            const std::size_t want = kind == ConditionKind::OverlapAllNouns ? roles.size() : 1;
            if (same_role != want) add("overlap", {s.text, std::to_string(same_role) + " shared role nouns"}, i);
        }
        if (kind == ConditionKind::OverlapVerb) {
            if (s.spec.verb != t_.spec.verb) add("overlap", {s.spec.verb, t_.spec.verb}, i);
            allowed.insert(t_.spec.verb);
        }
        if (kind == ConditionKind::SemSimVerb || kind == ConditionKind::SemSimAll)
            matched.emplace_back(s.spec.verb, t_.spec.verb);
        if (kind == ConditionKind::SemSimNouns || kind == ConditionKind::SemSimAll)
            for (const auto& [r, np] : roles) matched.emplace_back(s.spec.role(r)->noun, np->noun);

        for (const auto& w : s.content_lemmas) {
            if (!t_.content_lemmas.count(w) || allowed.count(w)) continue;
            if (w == s.spec.verb)
                add("verb_disjoint", {w}, i);
            else if (lex_.find_noun(w))
                add("noun_disjoint", {w}, i);
            else
                add("content_disjoint", {w}, i);
        }

        for (const auto& [a, b] : matched) {
            if (a == b) continue;  // already reported as shared
            if (!cond_.similarity_threshold) {
                add("similarity", {a, b, "no similarity threshold"}, i);
            } else if (!is_associated(a, b, lex_) || cosine_similarity(a, b, lex_) < *cond_.similarity_threshold) {
                add("similarity", {a, b}, i);
            }
        }

        for (const auto& a : s.content_lemmas) {
            if (allowed.count(a)) continue;
            for (const auto& b : t_.content_lemmas) {
                if (a == b) continue;
                if (std::find(matched.begin(), matched.end(), std::make_pair(a, b)) != matched.end()) continue;
                if (is_associated(a, b, lex_)) add("association", {a, b}, i);
            }
        }

        if (kind == ConditionKind::ImplausiblePrime) {
            const auto* verb = lex_.find_verb(s.spec.verb);
            for (const auto& [r, np] : s.spec.roles())
                if (lex_.find_noun(np->noun)->categories.intersects(verb->role_categories(r)))
                    add("implausibility", {std::string(to_string(r)), np->noun, verb->lemma}, i);
        }

        const int n = complex_count(s.spec);
        const bool complex_prime = kind == ConditionKind::Complexity && cond_.mode != ComplexityMode::Target;
        if (n != (complex_prime ? 1 : 0)) {
            add("complexity", {s.text, "prime has " + std::to_string(n)}, i);
        } else if (kind == ConditionKind::Complexity && cond_.mode == ComplexityMode::Both &&
                   shape_of(s.spec) == shape_of(t_.spec)) {
            add("complexity", {std::string(to_string(shape_of(s.spec))), "same shape as target"}, i);
        }
    }

    const PrimeTargetItem& item_;
    const ConditionSpec& cond_;
    const Lexicon& lex_;
    const Sentence& t_;
    std::vector<Violation> out_;
};

}  // namespace

std::string Violation::describe() const {
    std::string out = constraint;
    if (pair_index >= 0) out += " [pair " + std::to_string(pair_index) + "]";
    for (std::size_t i = 0; i < words.size(); ++i) out += (i ? ", " : ": ") + words[i];
    return out;
}

std::vector<Violation> validate_pair(const PrimeTargetItem& item, const ConditionSpec& cond, const Lexicon& lex,
                                     std::optional<Construction> structure) {
    return Checker(item, cond, lex).run(structure);
}

}  // namespace priming
