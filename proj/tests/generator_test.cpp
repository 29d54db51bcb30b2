#include <gtest/gtest.h>

#include <set>

#include "priming/generator.hpp"
#include "priming/recognizer.hpp"
#include "priming/validator.hpp"
#include "test_support.hpp"

using namespace priming;
using priming::testing::fixture_lexicon;

namespace {

ConditionSpec small(const std::string& tag, std::size_t targets = 12, std::size_t primes = 4, std::uint64_t seed = 3) {
    auto c = parse_condition_tag(tag);
    c.targets_per_structure = targets;
    c.primes_per_target = primes;
    c.seed = seed;
    return c;
}

std::string dump(const Corpus& c) {
    std::string out;
    for (const auto& item : c.items) {
        out += item.id + "|" + item.target.text + "\n";
        for (const auto& p : item.pairs) {
            out += format_context(p.congruent) + " || " + format_context(p.incongruent) + "\n";
        }
    }
    return out;
}

}  // namespace

TEST(Generator, SameSeedSameCorpus) {
    const auto& lex = fixture_lexicon();
    for (auto s : kTargetStructures) {
        auto a = build_structure_corpus(small("core"), s, lex);
        auto b = build_structure_corpus(small("core"), s, lex);
        EXPECT_EQ(dump(a), dump(b));
        ASSERT_EQ(a.items.size(), 12u);
    }
    auto c = build_structure_corpus(small("core", 12, 4, 4), Construction::DO, lex);
    EXPECT_NE(dump(c), dump(build_structure_corpus(small("core"), Construction::DO, lex)));
}

TEST(Generator, ThreadCountDoesNotChangeOutput) {
    const auto& lex = fixture_lexicon();
    for (const char* tag : {"core", "recency_3", "overlap_verb"}) {
        auto one = build_structure_corpus(small(tag), Construction::PO, lex, {.threads = 1});
        auto many = build_structure_corpus(small(tag), Construction::PO, lex, {.threads = 6});
        EXPECT_EQ(dump(one), dump(many)) << tag;
    }
}

TEST(Generator, MoreTargetsExtendsThePrefix) {
    const auto& lex = fixture_lexicon();
    auto a = build_structure_corpus(small("core", 8), Construction::ACT, lex);
    auto b = build_structure_corpus(small("core", 16), Construction::ACT, lex);
    ASSERT_EQ(b.items.size(), 16u);
    for (std::size_t i = 0; i < a.items.size(); ++i) EXPECT_EQ(a.items[i].target, b.items[i].target);
}

TEST(Generator, ItemsHaveRequestedShape) {
    const auto& lex = fixture_lexicon();
    for (auto s : kTargetStructures) {
        auto corpus = build_structure_corpus(small("core"), s, lex);
        std::set<std::string> targets;
        for (const auto& item : corpus.items) {
            EXPECT_EQ(item.structure(), s);
            EXPECT_EQ(item.pairs.size(), 4u);
            EXPECT_TRUE(targets.insert(item.target.text).second) << "duplicate target " << item.target.text;
            EXPECT_EQ(recognize(item.target.text, lex), s);
            for (const auto& p : item.pairs) {
                ASSERT_EQ(p.congruent.size(), 1u);
                ASSERT_EQ(p.incongruent.size(), 1u);
                EXPECT_EQ(p.congruent[0].spec.construction, s);
                EXPECT_EQ(p.incongruent[0].spec.construction, counterpart(s));
                EXPECT_EQ(p.incongruent[0].spec, alternate(p.congruent[0].spec));
                EXPECT_EQ(recognize(p.congruent[0].text, lex), s);
                EXPECT_EQ(recognize(p.incongruent[0].text, lex), counterpart(s));
            }
        }
    }
}

TEST(Generator, RecencyPutsPrimeAtPosition) {
    const auto& lex = fixture_lexicon();
    for (int pos = 1; pos <= 4; ++pos) {
        auto corpus = build_structure_corpus(small("recency_" + std::to_string(pos), 6), Construction::DO, lex);
        for (const auto& item : corpus.items) {
            for (const auto& p : item.pairs) {
                ASSERT_EQ(p.congruent.size(), 4u);
                for (int i = 0; i < 4; ++i) {
                    const auto c = p.congruent[i].spec.construction;
                    if (i == pos - 1)
                        EXPECT_EQ(c, Construction::DO);
                    else
                        EXPECT_EQ(c, Construction::INTR_PAD);
                }
                EXPECT_EQ(p.prime().spec.construction, Construction::DO);
                EXPECT_EQ(p.incongruent.size(), 1u);
            }
        }
    }
}

TEST(Generator, CumulativeContextHasKPrimes) {
    const auto& lex = fixture_lexicon();
    for (int k : {1, 3, 5}) {
        auto corpus = build_structure_corpus(small("cumulative_" + std::to_string(k), 5, 3), Construction::PASS, lex);
        for (const auto& item : corpus.items)
            for (const auto& p : item.pairs) {
                ASSERT_EQ(p.congruent.size(), static_cast<std::size_t>(k));
                for (const auto& s : p.congruent) EXPECT_EQ(s.spec.construction, Construction::PASS);
            }
    }
}

TEST(Generator, CorpusPassesIndependentValidator) {
    const auto& lex = fixture_lexicon();
    for (const char* tag : {"core", "overlap_random_noun", "overlap_verb", "overlap_function_words", "identical",
                            "implausible_prime", "recency_1", "cumulative_4", "complexity_prime",
                            "complexity_target", "complexity_both"}) {
        for (auto s : kTargetStructures) {
            auto cond = small(tag, 6, 3);
            auto corpus = build_structure_corpus(cond, s, lex);
            for (const auto& item : corpus.items) {
                auto v = validate_pair(item, cond, lex, s);
                EXPECT_TRUE(v.empty()) << tag << " " << to_string(s) << ": " << v.front().describe();
            }
        }
    }
}

TEST(Generator, ImpossibleConditionNamesConstraint) {
    // The fixture has no verb pair similar enough for sem_sim_verb.
    auto cond = small("sem_sim_verb", 5, 3);
    cond.similarity_threshold = 0.999;
    cond.max_attempts = 200;
    try {
        build_structure_corpus(cond, Construction::ACT, fixture_lexicon());
        FAIL() << "expected GenerationError";
    } catch (const GenerationError& e) {
        EXPECT_FALSE(e.constraint().empty());
        EXPECT_NE(std::string(e.what()).find(e.constraint()), std::string::npos) << e.what();
    }
}

TEST(Generator, SimilarityNeedsThreshold) {
    auto cond = small("sem_sim_nouns");
    EXPECT_ANY_THROW(build_structure_corpus(cond, Construction::ACT, fixture_lexicon()));
    auto resolved = resolve_condition(cond, fixture_lexicon());
    ASSERT_TRUE(resolved.similarity_threshold.has_value());
    EXPECT_GE(*resolved.similarity_threshold, -1.0);
    EXPECT_LE(*resolved.similarity_threshold, 1.0);
}

TEST(Padding, YouMightCome) {
    const auto& lex = fixture_lexicon();
    std::set<std::string> texts;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        auto s = padding_sentence(lex, rng);
        EXPECT_EQ(s.spec.construction, Construction::INTR_PAD);
        EXPECT_EQ(recognize(s.text, lex), Construction::INTR_PAD);
        texts.insert(s.text);
    }
    EXPECT_TRUE(texts.count("You might come")) << "padding never produced the canonical form";
}

TEST(TrainingText, FollowsMix) {
    const auto& lex = fixture_lexicon();
    auto docs = make_training_text(lex, {{Construction::DO, 0.9}, {Construction::PO, 0.1}}, 100, 10, 1);
    ASSERT_EQ(docs.size(), 100u);
    std::size_t n_do = 0, n_po = 0;
    for (const auto& d : docs) {
        std::size_t start = 0;
        while (start < d.size()) {
            auto end = d.find(". ", start);
            auto sentence = d.substr(start, end == std::string::npos ? std::string::npos : end - start);
            if (!sentence.empty() && sentence.back() == '.') sentence.pop_back();
            auto c = recognize(sentence, lex);
            ASSERT_TRUE(c.has_value()) << sentence;
            (*c == Construction::DO ? n_do : n_po) += 1;
            if (end == std::string::npos) break;
            start = end + 2;
        }
    }
    EXPECT_EQ(n_do + n_po, 1000u);
    EXPECT_NEAR(static_cast<double>(n_do) / 1000.0, 0.9, 0.04);
    EXPECT_EQ(docs, make_training_text(lex, {{Construction::DO, 0.9}, {Construction::PO, 0.1}}, 100, 10, 1));
}
