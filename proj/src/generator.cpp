#include "priming/generator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_set>

namespace priming {

namespace {

using LemmaSet = std::unordered_set<std::string>;

constexpr std::size_t kRoleCount = 3;
constexpr std::size_t kBatch = 64;
constexpr NpShape kComplexShapes[] = {NpShape::Adjective, NpShape::PP, NpShape::AdjectivePP};

std::size_t idx(Role r) { return static_cast<std::size_t>(r); }

std::vector<Role> roles_of(Construction c) {
    if (is_dative(c)) return {Role::Agent, Role::Patient, Role::Recipient};
    return {Role::Agent, Role::Patient};
}

Determiner opposite(Determiner d) { return d == Determiner::The ? Determiner::AAn : Determiner::The; }
Tense opposite(Tense t) { return t == Tense::Past ? Tense::Present : Tense::Past; }

std::string set_key(const std::set<std::string>& s) {
    std::string k;
    for (const auto& w : s) {
        k += w;
        k += '|';
    }
    return k;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct Pools {
    std::vector<const VerbEntry*> transitive, ditransitive, padding;
    std::vector<const NounEntry*> role_nouns, with_nouns, countries;
    std::vector<const AdjectiveEntry*> adjectives;

    explicit Pools(const Lexicon& lex) {
        for (const auto& v : lex.verbs) {
            if (!lex.sampleable(v)) continue;
            switch (v.kind) {
                case VerbKind::Transitive: transitive.push_back(&v); break;
                case VerbKind::Ditransitive: ditransitive.push_back(&v); break;
                case VerbKind::IntransitivePadding: padding.push_back(&v); break;
            }
        }
        for (const auto& w : lex.pp_with_nouns)
            if (lex.sampleable(*lex.find_noun(w))) with_nouns.push_back(lex.find_noun(w));
        for (const auto& w : lex.countries)
            if (lex.sampleable(*lex.find_noun(w))) countries.push_back(lex.find_noun(w));
        for (const auto& n : lex.nouns) {
            if (!lex.sampleable(n) || n.categories.contains(Category::Country)) continue;
            if (std::find(with_nouns.begin(), with_nouns.end(), &n) != with_nouns.end()) continue;
            role_nouns.push_back(&n);
        }
        for (const auto& a : lex.adjectives)
            if (lex.sampleable(a)) adjectives.push_back(&a);
    }

    const std::vector<const VerbEntry*>& verbs(Construction c) const {
        return is_dative(c) ? ditransitive : transitive;
    }
};

struct Failure {
    std::string constraint;
    std::string detail;
};

// Constraints for drawing one sentence. Caches candidate noun lists per verb and
// role, so a Slot is meant to be reused across the prime slots of one target.
struct Slot {
    Construction construction = Construction::ACT;
    Determiner determiner = Determiner::The;
    Tense tense = Tense::Past;
    std::optional<std::string> required_prep;
    std::optional<std::string> forbidden_prep;
    const LemmaSet* blocked = nullptr;
    std::optional<std::string> fixed_verb;
    std::optional<std::vector<std::string>> verb_choices;
    std::array<std::optional<std::string>, kRoleCount> fixed_nouns;
    std::array<std::optional<std::vector<std::string>>, kRoleCount> noun_choices;
    bool implausible = false;
    std::optional<NpShape> shape;

    std::map<std::pair<const VerbEntry*, std::size_t>, std::vector<const NounEntry*>> cache;
    std::optional<std::vector<const VerbEntry*>> verbs;

    bool is_blocked(const std::string& w) const { return blocked && blocked->count(w); }
};

using Acceptor = std::function<std::optional<std::string>(const Sentence&)>;

class Sampler {
public:
    Sampler(const Lexicon& lex, const Pools& pools, std::size_t max_attempts)
        : lex_(lex), pools_(pools), max_attempts_(max_attempts) {}

    std::optional<Sentence> sample(Slot& slot, Rng& rng, const Acceptor& accept, Failure& why) const {
        if (!slot.verbs) slot.verbs = candidate_verbs(slot, why);
        auto& verbs = *slot.verbs;
        if (verbs.empty()) {
            if (why.constraint.empty()) why = {"verb_pool", "no verb satisfies the slot constraints"};
            return std::nullopt;
        }
        const auto roles = roles_of(slot.construction);
        for (std::size_t attempt = 0; attempt < max_attempts_ && !verbs.empty(); ++attempt) {
            const std::size_t vi = rng.below(verbs.size());
            const VerbEntry* verb = verbs[vi];

            SentenceSpec spec;
            spec.construction = slot.construction;
            spec.verb = verb->lemma;
            spec.tense = slot.tense;
            spec.implausible = slot.implausible;
            if (is_dative(slot.construction)) spec.recipient = NounPhraseSpec{};

            std::set<std::string> used;
            bool dead_verb = false, ok = true;
            for (Role r : roles) {
                const auto& pool = nouns_for(slot, verb, r);
                if (pool.empty()) {
                    dead_verb = true;
                    why = {slot.implausible ? "implausibility" : "noun_pool",
                           "no " + std::string(to_string(r)) + " noun for '" + verb->lemma + "'"};
                    break;
                }
                std::vector<const NounEntry*> free;
                free.reserve(pool.size());
                for (const auto* n : pool)
                    if (!used.count(n->lemma)) free.push_back(n);
                if (free.empty()) {
                    ok = false;
                    why = {"noun_distinct", "roles exhaust the noun pool of '" + verb->lemma + "'"};
                    break;
                }
                const auto* n = rng.pick(free);
                used.insert(n->lemma);
                auto* np = spec.role(r);
                np->noun = n->lemma;
                np->determiner = slot.determiner;
            }
            if (dead_verb) {
                verbs.erase(verbs.begin() + static_cast<std::ptrdiff_t>(vi));
                continue;
            }
            if (!ok) continue;
            if (slot.shape && !complexify(spec, *slot.shape, slot, rng, used, why)) continue;

            Sentence s;
            try {
                s = realize(spec, lex_);
            } catch (const RealizationError& e) {
                why = {"realization", e.what()};
                continue;
            }
            if (accept) {
                if (auto reason = accept(s)) {
                    why = {*reason, "rejected: " + s.text};
                    // With every noun fixed the verb determines the sentence, so it is spent.
                    if (determined_by_verb(slot)) verbs.erase(verbs.begin() + static_cast<std::ptrdiff_t>(vi));
                    continue;
                }
            }
            return s;
        }
        if (verbs.empty() && why.constraint.empty()) why = {"verb_pool", "every candidate verb was exhausted"};
        return std::nullopt;
    }

    Sentence padding(Rng& rng, const LemmaSet& blocked, const std::set<std::string>& used_verbs,
                     const std::set<std::string>& used_pronouns, const std::set<std::string>& used_aux) const {
        std::vector<const VerbEntry*> verbs;
        for (const auto* v : pools_.padding)
            if (!blocked.count(v->lemma) && !used_verbs.count(v->lemma)) verbs.push_back(v);
        auto pronouns = unused(lex_.pronouns, used_pronouns);
        auto aux = unused(lex_.auxiliaries, used_aux);
        if (verbs.empty() || pronouns.empty() || aux.empty())
            throw GenerationError("padding", "padding inventory exhausted for one context");
        SentenceSpec spec;
        spec.construction = Construction::INTR_PAD;
        spec.verb = rng.pick(verbs)->lemma;
        spec.pronoun = rng.pick(pronouns);
        spec.auxiliary = rng.pick(aux);
        spec.tense = Tense::Present;
        return realize(spec, lex_);
    }

private:
    static std::vector<std::string> unused(const std::vector<std::string>& all, const std::set<std::string>& used) {
        std::vector<std::string> out;
        for (const auto& w : all)
            if (!used.count(w)) out.push_back(w);
        return out;
    }

    static bool determined_by_verb(const Slot& slot) {
        if (slot.shape) return false;
        for (Role r : roles_of(slot.construction))
            if (!slot.fixed_nouns[idx(r)]) return false;
        return true;
    }

    bool admits(const VerbEntry* v, Role r, const NounEntry& n, bool implausible) const {
        bool fits = n.categories.intersects(v->role_categories(r));
        return implausible ? !fits : fits;
    }

    std::vector<const VerbEntry*> candidate_verbs(const Slot& slot, Failure& why) const {
        std::vector<const VerbEntry*> out;
        if (slot.fixed_verb) {
            out.push_back(lex_.find_verb(*slot.fixed_verb));
        } else if (slot.verb_choices) {
            for (const auto& v : *slot.verb_choices) out.push_back(lex_.find_verb(v));
            if (out.empty()) why = {"similarity", "no semantically similar verb"};
        } else {
            for (const auto* v : pools_.verbs(slot.construction))
                if (!slot.is_blocked(v->lemma)) out.push_back(v);
            if (out.empty()) why = {"association", "every verb is shared with or associated to the target"};
        }
        const auto before = out.size();
        std::erase_if(out, [&](const VerbEntry* v) {
            if (slot.required_prep && v->po_preposition != slot.required_prep) return true;
            if (slot.forbidden_prep && v->po_preposition == slot.forbidden_prep) return true;
            return false;
        });
        if (out.empty() && before) why = {"preposition", "no verb with an admissible preposition"};
        return out;
    }

    const std::vector<const NounEntry*>& nouns_for(Slot& slot, const VerbEntry* v, Role r) const {
        auto key = std::make_pair(v, idx(r));
        auto it = slot.cache.find(key);
        if (it != slot.cache.end()) return it->second;
        std::vector<const NounEntry*> out;
        if (const auto& fixed = slot.fixed_nouns[idx(r)]) {
            const auto* n = lex_.find_noun(*fixed);
            if (n && admits(v, r, *n, false)) out.push_back(n);
        } else if (const auto& choices = slot.noun_choices[idx(r)]) {
            for (const auto& w : *choices) {
                const auto* n = lex_.find_noun(w);
                if (n && admits(v, r, *n, slot.implausible)) out.push_back(n);
            }
        } else {
            for (const auto* n : pools_.role_nouns)
                if (!slot.is_blocked(n->lemma) && admits(v, r, *n, slot.implausible)) out.push_back(n);
        }
        return slot.cache.emplace(key, std::move(out)).first->second;
    }

    bool complexify(SentenceSpec& spec, NpShape shape, const Slot& slot, Rng& rng, std::set<std::string>& used,
                    Failure& why) const {
        auto roles = roles_of(spec.construction);
        rng.shuffle(roles);
        const bool want_adj = shape == NpShape::Adjective || shape == NpShape::AdjectivePP;
        const bool want_pp = shape == NpShape::PP || shape == NpShape::AdjectivePP;
        for (Role r : roles) {
            auto* np = spec.role(r);
            const auto* head = lex_.find_noun(np->noun);
            std::optional<std::string> adjective;
            if (want_adj) {
                std::vector<const AdjectiveEntry*> adjs;
                for (const auto* a : pools_.adjectives)
                    if (a->compatible_categories.intersects(head->categories) && !slot.is_blocked(a->lemma) &&
                        !used.count(a->lemma))
                        adjs.push_back(a);
                if (adjs.empty()) continue;
                adjective = rng.pick(adjs)->lemma;
            }
            std::optional<PrepPhrase> pp;
            if (want_pp) {
                auto free = [&](const std::vector<const NounEntry*>& pool) {
                    std::vector<const NounEntry*> out;
                    for (const auto* n : pool)
                        if (!slot.is_blocked(n->lemma) && !used.count(n->lemma)) out.push_back(n);
                    return out;
                };
                auto with = free(pools_.with_nouns);
                auto from = free(pools_.countries);
                bool use_with = rng.coin();
                if (use_with && with.empty()) use_with = false;
                if (!use_with && from.empty()) use_with = true;
                if (use_with && with.empty()) continue;
                PrepPhrase p;
                p.kind = use_with ? PrepPhrase::Kind::With : PrepPhrase::Kind::From;
                if (use_with) p.determiner = slot.determiner;
                p.noun = rng.pick(use_with ? with : from)->lemma;
                pp = p;
            }
            np->adjective = adjective;
            np->pp = pp;
            if (adjective) used.insert(*adjective);
            if (pp) used.insert(pp->noun);
            return true;
        }
        why = {"complexity", "no role admits a " + std::string(to_string(shape)) + " phrase"};
        return false;
    }

    const Lexicon& lex_;
    const Pools& pools_;
    std::size_t max_attempts_;
};

class StructureBuilder {
public:
    StructureBuilder(const ConditionSpec& cond, Construction structure, const Lexicon& lex, const GenerateOptions& opts)
        : cond_(cond), x_(structure), lex_(lex), opts_(opts), pools_(lex), sampler_(lex, pools_, cond.max_attempts),
          stream_(cond.tag() + "/" + std::string(to_string(structure))) {}

    Corpus run() {
        Corpus corpus;
        corpus.condition = cond_;
        corpus.structure = x_;
        const std::size_t wanted = cond_.targets_per_structure;
        const std::size_t candidate_limit = wanted * 50 + cond_.max_attempts;

        Rng target_rng(derive_seed(cond_.seed, stream_ + "/targets"));
        std::unordered_set<std::string> seen_targets;
        std::size_t consecutive_duplicates = 0;
        bool exhausted = false;

        while (corpus.items.size() < wanted && !exhausted && corpus.stats.candidates < candidate_limit) {
            std::vector<Sentence> batch;
            std::vector<std::size_t> indices;
            while (batch.size() < kBatch && corpus.stats.candidates < candidate_limit) {
                auto t = draw_target(target_rng);
                if (!t || !seen_targets.insert(set_key(t->content_lemmas)).second) {
                    if (++consecutive_duplicates >= cond_.max_attempts) {
                        exhausted = true;
                        break;
                    }
                    continue;
                }
                consecutive_duplicates = 0;
                indices.push_back(corpus.stats.candidates++);
                batch.push_back(std::move(*t));
            }
            std::vector<std::optional<PrimeTargetItem>> results(batch.size());
            std::vector<Failure> failures(batch.size());
            parallel_for(batch.size(), opts_.threads, [&](std::size_t i) {
                Rng rng(derive_seed(cond_.seed, stream_, indices[i]));
                results[i] = build_item(batch[i], rng, failures[i]);
            });
            for (std::size_t i = 0; i < batch.size() && corpus.items.size() < wanted; ++i) {
                if (!results[i]) {
                    ++corpus.stats.skipped_targets;
                    ++corpus.stats.failures[failures[i].constraint];
                    continue;
                }
                auto& item = *results[i];
                item.id = cond_.tag() + "/" + std::string(to_string(x_)) + "/" + std::to_string(corpus.items.size());
                corpus.items.push_back(std::move(item));
            }
        }

        if (corpus.items.size() < wanted && cond_.kind != ConditionKind::SemSimAll) {
            std::string worst = "target_space";
            std::size_t worst_count = 0;
            for (const auto& [k, v] : corpus.stats.failures)
                if (v > worst_count) std::tie(worst, worst_count) = std::tie(k, v);
            throw GenerationError(worst, cond_.tag() + "/" + std::string(to_string(x_)) + ": only " +
                                             std::to_string(corpus.items.size()) + " of " + std::to_string(wanted) +
                                             " targets satisfiable after " + std::to_string(corpus.stats.candidates) +
                                             " candidates; most frequent exhausted constraint: " + worst + " (" +
                                             std::to_string(worst_count) + ")");
        }
        return corpus;
    }

private:
    std::optional<Sentence> draw_target(Rng& rng) const {
        Slot slot;
        slot.construction = x_;
        slot.determiner = rng.coin() ? Determiner::The : Determiner::AAn;
        slot.tense = is_dative(x_) ? Tense::Past : (rng.coin() ? Tense::Past : Tense::Present);
        if (cond_.kind == ConditionKind::Complexity && cond_.mode != ComplexityMode::Prime)
            slot.shape = kComplexShapes[rng.below(3)];
        Failure why;
        return sampler_.sample(slot, rng, {}, why);
    }

    // Prime slot with the core contrasts against the target.
    Slot core_slot(const Sentence& t, const LemmaSet& blocked) const {
        Slot s;
        s.construction = x_;
        s.determiner = opposite(t.spec.agent.determiner);
        s.tense = is_dative(x_) ? Tense::Past : opposite(t.spec.tense);
        if (x_ == Construction::PO) s.forbidden_prep = lex_.find_verb(t.spec.verb)->po_preposition;
        s.blocked = &blocked;
        return s;
    }

    LemmaSet blocked_by(const std::set<std::string>& lemmas) const {
        LemmaSet out;
        for (const auto& w : lemmas) {
            out.insert(w);
            for (const auto& n : lex_.associations.neighbours(w)) out.insert(n);
        }
        return out;
    }

    // True iff `w` may stand in a role-matched relation to target lemma `matched`
    // while staying unrelated to every other target lemma.
    bool similar_to(const std::string& w, const std::string& matched, const Sentence& t) const {
        if (w == matched || !is_associated(w, matched, lex_)) return false;
        if (!lex_.embeddings.contains(w) || cosine_similarity(w, matched, lex_) < *cond_.similarity_threshold)
            return false;
        for (const auto& other : t.content_lemmas) {
            if (other == matched) continue;
            if (other == w || is_associated(w, other, lex_)) return false;
        }
        return true;
    }

    std::vector<std::string> similar_verbs(const Sentence& t) const {
        std::vector<std::string> out;
        for (const auto* v : pools_.verbs(x_))
            if (similar_to(v->lemma, t.spec.verb, t)) out.push_back(v->lemma);
        return out;
    }

    std::vector<std::string> similar_nouns(const Sentence& t, Role r) const {
        std::vector<std::string> out;
        const auto& matched = t.spec.role(r)->noun;
        for (const auto* n : pools_.role_nouns)
            if (similar_to(n->lemma, matched, t)) out.push_back(n->lemma);
        return out;
    }

    PrimePair pair_for(std::vector<Sentence> congruent, const Sentence& prime) const {
        PrimePair p;
        p.congruent = std::move(congruent);
        p.incongruent.push_back(realize(alternate(prime.spec), lex_));
        return p;
    }

    std::optional<PrimeTargetItem> build_item(const Sentence& target, Rng& rng, Failure& why) const {
        PrimeTargetItem item;
        item.target = target;
        item.condition = cond_;
        const std::size_t n = cond_.pairs_per_target();
        const LemmaSet blocked = blocked_by(target.content_lemmas);

        std::unordered_set<std::string> seen;
        Acceptor distinct = [&](const Sentence& s) -> std::optional<std::string> {
            if (seen.count(set_key(s.content_lemmas))) return "prime_distinct";
            return std::nullopt;
        };
        auto remember = [&](const Sentence& s) { seen.insert(set_key(s.content_lemmas)); };

        auto simple_pairs = [&](Slot& slot) -> bool {
            for (std::size_t i = 0; i < n; ++i) {
                auto p = sampler_.sample(slot, rng, distinct, why);
                if (!p) return false;
                remember(*p);
                item.pairs.push_back(pair_for({*p}, *p));
            }
            return true;
        };

        switch (cond_.kind) {
            case ConditionKind::Core: {
                auto slot = core_slot(target, blocked);
                if (!simple_pairs(slot)) return std::nullopt;
                break;
            }
            case ConditionKind::SemSimVerb: {
                auto slot = core_slot(target, blocked);
                slot.forbidden_prep.reset();
                slot.verb_choices = similar_verbs(target);
                if (!simple_pairs(slot)) return std::nullopt;
                break;
            }
            case ConditionKind::SemSimNouns: {
                auto slot = core_slot(target, blocked);
                for (Role r : roles_of(x_)) slot.noun_choices[idx(r)] = similar_nouns(target, r);
                if (!simple_pairs(slot)) return std::nullopt;
                break;
            }
            case ConditionKind::SemSimAll: {
                auto primes = enumerate_similar(target, why);
                if (primes.empty()) return std::nullopt;
                rng.shuffle(primes);
                if (primes.size() > cond_.primes_per_target) primes.resize(cond_.primes_per_target);
                for (const auto& p : primes) item.pairs.push_back(pair_for({p}, p));
                break;
            }
            case ConditionKind::OverlapRandomNoun: {
                const auto roles = roles_of(x_);
                std::vector<Slot> slots;
                for (Role r : roles) {
                    slots.push_back(core_slot(target, blocked));
                    slots.back().fixed_nouns[idx(r)] = target.spec.role(r)->noun;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    auto& slot = slots[rng.below(slots.size())];
                    auto p = sampler_.sample(slot, rng, distinct, why);
                    if (!p) return std::nullopt;
                    remember(*p);
                    item.pairs.push_back(pair_for({*p}, *p));
                }
                break;
            }
            case ConditionKind::OverlapAllNouns: {
                auto slot = core_slot(target, blocked);
                for (Role r : roles_of(x_)) slot.fixed_nouns[idx(r)] = target.spec.role(r)->noun;
                if (!simple_pairs(slot)) return std::nullopt;
                break;
            }
            case ConditionKind::OverlapVerb: {
                auto slot = core_slot(target, blocked);
                slot.forbidden_prep.reset();
                slot.fixed_verb = target.spec.verb;
                if (!simple_pairs(slot)) return std::nullopt;
                break;
            }
            case ConditionKind::OverlapFunctionWords: {
                auto slot = core_slot(target, blocked);
                slot.determiner = target.spec.agent.determiner;
                slot.tense = target.spec.tense;
                slot.forbidden_prep.reset();
                if (x_ == Construction::PO) slot.required_prep = lex_.find_verb(target.spec.verb)->po_preposition;
                if (!simple_pairs(slot)) return std::nullopt;
                break;
            }
            case ConditionKind::Identical:
                item.pairs.push_back(pair_for({target}, target));
                break;
            case ConditionKind::ImplausiblePrime: {
                auto slot = core_slot(target, blocked);
                slot.implausible = true;
                if (!simple_pairs(slot)) return std::nullopt;
                break;
            }
            case ConditionKind::Recency: {
                auto slot = core_slot(target, blocked);
                for (std::size_t i = 0; i < n; ++i) {
                    auto p = sampler_.sample(slot, rng, distinct, why);
                    if (!p) return std::nullopt;
                    remember(*p);
                    auto both = target.content_lemmas;
                    both.insert(p->content_lemmas.begin(), p->content_lemmas.end());
                    const auto pad_blocked = blocked_by(both);
                    std::set<std::string> verbs, pronouns, aux;
                    std::vector<Sentence> context;
                    for (int pos = 1; pos <= 4; ++pos) {
                        if (pos == cond_.position) {
                            context.push_back(*p);
                            continue;
                        }
                        try {
                            context.push_back(sampler_.padding(rng, pad_blocked, verbs, pronouns, aux));
                        } catch (const GenerationError& e) {
                            why = {e.constraint(), e.what()};
                            return std::nullopt;
                        }
                        verbs.insert(context.back().spec.verb);
                        pronouns.insert(*context.back().spec.pronoun);
                        aux.insert(*context.back().spec.auxiliary);
                    }
                    item.pairs.push_back(pair_for(std::move(context), *p));
                }
                break;
            }
            case ConditionKind::Cumulative: {
                auto slot = core_slot(target, blocked);
                for (std::size_t i = 0; i < n; ++i) {
                    std::unordered_set<std::string> in_context;
                    std::vector<Sentence> context;
                    for (int j = 0; j < cond_.k; ++j) {
                        const bool last = j + 1 == cond_.k;
                        Acceptor accept = [&](const Sentence& s) -> std::optional<std::string> {
                            const auto key = set_key(s.content_lemmas);
                            if (in_context.count(key) || (last && seen.count(key))) return "prime_distinct";
                            return std::nullopt;
                        };
                        auto p = sampler_.sample(slot, rng, accept, why);
                        if (!p) return std::nullopt;
                        in_context.insert(set_key(p->content_lemmas));
                        context.push_back(std::move(*p));
                    }
                    remember(context.back());
                    auto prime = context.back();
                    item.pairs.push_back(pair_for(std::move(context), prime));
                }
                break;
            }
            case ConditionKind::Complexity: {
                std::vector<Slot> slots;
                if (cond_.mode == ComplexityMode::Target) {
                    slots.push_back(core_slot(target, blocked));
                } else {
                    for (NpShape shape : kComplexShapes) {
                        if (cond_.mode == ComplexityMode::Both && shape == target_shape(target)) continue;
                        slots.push_back(core_slot(target, blocked));
                        slots.back().shape = shape;
                    }
                }
                for (std::size_t i = 0; i < n; ++i) {
                    auto& slot = slots[rng.below(slots.size())];
                    auto p = sampler_.sample(slot, rng, distinct, why);
                    if (!p) return std::nullopt;
                    remember(*p);
                    item.pairs.push_back(pair_for({*p}, *p));
                }
                break;
            }
        }
        return item;
    }

    static NpShape target_shape(const Sentence& t) {
        for (const auto& [r, np] : t.spec.roles())
            if (np->complex()) return np_shape(*np);
        return NpShape::Simple;
    }

    std::vector<Sentence> enumerate_similar(const Sentence& t, Failure& why) const {
        std::vector<Sentence> out;
        const auto verbs = similar_verbs(t);
        if (verbs.empty()) {
            why = {"similarity", "no semantically similar verb"};
            return out;
        }
        const auto roles = roles_of(x_);
        std::array<std::vector<std::string>, kRoleCount> choices;
        for (Role r : roles) {
            choices[idx(r)] = similar_nouns(t, r);
            if (choices[idx(r)].empty()) {
                why = {"similarity", "no semantically similar " + std::string(to_string(r))};
                return out;
            }
        }
        const Determiner det = opposite(t.spec.agent.determiner);
        const Tense tense = is_dative(x_) ? Tense::Past : opposite(t.spec.tense);
        for (const auto& vl : verbs) {
            const auto* v = lex_.find_verb(vl);
            std::array<std::vector<std::string>, kRoleCount> fit;
            bool any = true;
            for (Role r : roles) {
                for (const auto& w : choices[idx(r)])
                    if (lex_.find_noun(w)->categories.intersects(v->role_categories(r))) fit[idx(r)].push_back(w);
                any = any && !fit[idx(r)].empty();
            }
            if (!any) continue;
            SentenceSpec spec;
            spec.construction = x_;
            spec.verb = vl;
            spec.tense = tense;
            if (is_dative(x_)) spec.recipient = NounPhraseSpec{};
            std::function<void(std::size_t)> fill = [&](std::size_t ri) {
                if (ri == roles.size()) {
                    out.push_back(realize(spec, lex_));
                    return;
                }
                auto* np = spec.role(roles[ri]);
                for (const auto& w : fit[idx(roles[ri])]) {
                    bool clash = false;
                    for (std::size_t j = 0; j < ri; ++j) clash = clash || spec.role(roles[j])->noun == w;
                    if (clash) continue;
                    np->noun = w;
                    np->determiner = det;
                    fill(ri + 1);
                }
            };
            fill(0);
        }
        if (out.empty()) why = {"similarity", "no verb admits the similar nouns"};
        return out;
    }

    const ConditionSpec& cond_;
    Construction x_;
    const Lexicon& lex_;
    GenerateOptions opts_;
    Pools pools_;
    Sampler sampler_;
    std::string stream_;
};

}  // namespace

const Sentence& PrimePair::prime() const {
    for (auto it = congruent.rbegin(); it != congruent.rend(); ++it)
        if (it->spec.construction != Construction::INTR_PAD) return *it;
    throw std::logic_error("prime pair without a prime sentence");
}

std::size_t Corpus::pair_count() const {
    std::size_t n = 0;
    for (const auto& item : items) n += item.pairs.size();
    return n;
}

std::vector<double> role_matched_similarities(const Corpus& corpus, const Lexicon& lex) {
    std::vector<double> out;
    for (const auto& item : corpus.items) {
        const auto& t = item.target.spec;
        for (const auto& pair : item.pairs) {
            for (const auto& s : pair.congruent) {
                if (s.spec.construction == Construction::INTR_PAD) continue;
                out.push_back(cosine_similarity(s.spec.verb, t.verb, lex));
                for (const auto& [r, np] : s.spec.roles())
                    if (const auto* tn = t.role(r)) out.push_back(cosine_similarity(np->noun, tn->noun, lex));
            }
        }
    }
    return out;
}

double calibrate_similarity_threshold(const Lexicon& lex, std::uint64_t seed, std::size_t targets_per_structure,
                                      const GenerateOptions& opts) {
    ConditionSpec core;
    core.seed = seed;
    core.targets_per_structure = targets_per_structure;
    std::vector<double> samples;
    for (Construction x : kTargetStructures) {
        auto corpus = build_structure_corpus(core, x, lex, opts);
        auto s = role_matched_similarities(corpus, lex);
        samples.insert(samples.end(), s.begin(), s.end());
    }
    return similarity_threshold(std::move(samples), kSimilarityPercentile);
}

ConditionSpec resolve_condition(ConditionSpec cond, const Lexicon& lex, const GenerateOptions& opts) {
    cond.validate();
    if (cond.uses_similarity() && !cond.similarity_threshold)
        cond.similarity_threshold = calibrate_similarity_threshold(lex, cond.seed, kCalibrationTargets, opts);
    return cond;
}

Corpus build_structure_corpus(const ConditionSpec& cond, Construction structure, const Lexicon& lex,
                              const GenerateOptions& opts) {
    cond.validate();
    if (structure == Construction::INTR_PAD) throw ConditionError("INTR_PAD is not a target structure");
    if (cond.uses_similarity() && !cond.similarity_threshold)
        throw ConditionError(cond.tag() + " needs a resolved similarity threshold");
    return StructureBuilder(cond, structure, lex, opts).run();
}

std::vector<Corpus> build_corpus(const ConditionSpec& cond, const Lexicon& lex, const GenerateOptions& opts) {
    const auto resolved = resolve_condition(cond, lex, opts);
    std::vector<Corpus> out;
    for (Construction x : kTargetStructures) out.push_back(build_structure_corpus(resolved, x, lex, opts));
    return out;
}

Sentence padding_sentence(const Lexicon& lex, Rng& rng) {
    Pools pools(lex);
    if (pools.padding.empty()) throw GenerationError("padding", "lexicon has no intransitive_padding verbs");
    if (lex.pronouns.empty() || lex.auxiliaries.empty())
        throw GenerationError("padding", "lexicon has no padding pronouns or auxiliaries");
    Sampler sampler(lex, pools, 1);
    return sampler.padding(rng, {}, {}, {}, {});
}

std::vector<std::string> make_training_text(const Lexicon& lex, const std::map<Construction, double>& mix,
                                            std::size_t documents, std::size_t sentences_per_document,
                                            std::uint64_t seed) {
    double total = 0;
    for (const auto& [c, w] : mix) {
        if (c == Construction::INTR_PAD || !(w >= 0)) throw std::invalid_argument("invalid construction mix");
        total += w;
    }
    if (!(total > 0)) throw std::invalid_argument("construction mix has no weight");
    Pools pools(lex);
    Sampler sampler(lex, pools, 10000);
    std::vector<std::string> out;
    out.reserve(documents);
    for (std::size_t d = 0; d < documents; ++d) {
        Rng rng(derive_seed(seed, "training-text", d));
        std::vector<Sentence> doc;
        for (std::size_t i = 0; i < sentences_per_document; ++i) {
            // Weighted pick with a 53-bit uniform draw.
            double u = static_cast<double>(rng.next() >> 11) * 0x1.0p-53 * total;
            Construction c = mix.rbegin()->first;
            for (const auto& [cc, w] : mix) {
                if (u < w) {
                    c = cc;
                    break;
                }
                u -= w;
            }
            Slot slot;
            slot.construction = c;
            slot.determiner = rng.coin() ? Determiner::The : Determiner::AAn;
            slot.tense = is_dative(c) ? Tense::Past : (rng.coin() ? Tense::Past : Tense::Present);
            Failure why;
            auto s = sampler.sample(slot, rng, {}, why);
            if (!s) throw GenerationError(why.constraint, "training text: " + why.detail);
            doc.push_back(std::move(*s));
        }
        out.push_back(format_context(doc));
    }
    return out;
}

}  // namespace priming
