#include <gtest/gtest.h>

#include <algorithm>

#include "priming/generator.hpp"
#include "priming/validator.hpp"
#include "test_support.hpp"

using namespace priming;
using priming::testing::fixture_lexicon;

namespace {

ConditionSpec cond_of(const std::string& tag) {
    auto c = parse_condition_tag(tag);
    c.targets_per_structure = 4;
    c.primes_per_target = 3;
    c.seed = 11;
    return c;
}

PrimeTargetItem first_item(const ConditionSpec& c, Construction s) {
    auto corpus = build_structure_corpus(c, s, fixture_lexicon());
    return corpus.items.at(0);
}

bool has(const std::vector<Violation>& v, const std::string& constraint) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.constraint == constraint; });
}

std::string all(const std::vector<Violation>& v) {
    std::string s;
    for (const auto& x : v) s += x.describe() + "; ";
    return s;
}

void set_prime(PrimePair& p, SentenceSpec spec) {
    const auto& lex = fixture_lexicon();
    p.congruent.back() = realize(spec, lex);
    p.incongruent.back() = realize(alternate(spec), lex);
}

}  // namespace

TEST(Validator, SharedVerbIsReported) {
    auto c = cond_of("core");
    auto item = first_item(c, Construction::DO);
    ASSERT_TRUE(validate_pair(item, c, fixture_lexicon()).empty());
    auto spec = item.pairs[0].prime().spec;
    spec.verb = item.target.spec.verb;
    set_prime(item.pairs[0], spec);
    auto v = validate_pair(item, c, fixture_lexicon());
    EXPECT_TRUE(has(v, "verb_disjoint")) << all(v);
    auto it = std::find_if(v.begin(), v.end(), [](const Violation& x) { return x.constraint == "verb_disjoint"; });
    ASSERT_NE(it, v.end());
    EXPECT_EQ(it->pair_index, 0);
    EXPECT_NE(std::find(it->words.begin(), it->words.end(), item.target.spec.verb), it->words.end());
}

TEST(Validator, AssociatedNounsAreReported) {
    auto c = cond_of("core");
    auto item = first_item(c, Construction::ACT);
    const auto& lex = fixture_lexicon();
    item.target.spec.agent.noun = "doctor";
    item.target = realize(item.target.spec, lex);
    auto spec = item.pairs[1].prime().spec;
    spec.agent.noun = "nurse";
    set_prime(item.pairs[1], spec);
    auto v = validate_pair(item, c, lex);
    EXPECT_TRUE(has(v, "association")) << all(v);
}

TEST(Validator, WrongAlternationIsReported) {
    auto c = cond_of("core");
    auto item = first_item(c, Construction::PO);
    item.pairs[0].incongruent = item.pairs[0].congruent;
    auto v = validate_pair(item, c, fixture_lexicon());
    EXPECT_TRUE(has(v, "alternation")) << all(v);
}

TEST(Validator, StructureMismatchIsReported) {
    auto c = cond_of("core");
    auto item = first_item(c, Construction::PASS);
    EXPECT_TRUE(has(validate_pair(item, c, fixture_lexicon(), Construction::ACT), "structure"));
}

TEST(Validator, EditedTextFailsRoundTrip) {
    auto c = cond_of("core");
    auto item = first_item(c, Construction::ACT);
    item.target.text += " quickly";
    EXPECT_FALSE(validate_pair(item, c, fixture_lexicon()).empty());
}

TEST(Validator, RecencyPositionIsChecked) {
    auto c = cond_of("recency_2");
    auto item = first_item(c, Construction::DO);
    ASSERT_TRUE(validate_pair(item, c, fixture_lexicon()).empty());
    auto other = cond_of("recency_3");
    EXPECT_FALSE(validate_pair(item, other, fixture_lexicon()).empty());
}

TEST(Validator, PaddingMustNotRepeat) {
    auto c = cond_of("recency_1");
    auto item = first_item(c, Construction::ACT);
    auto& ctx = item.pairs[0].congruent;
    ctx[2] = ctx[1];
    auto v = validate_pair(item, c, fixture_lexicon());
    EXPECT_FALSE(v.empty());
}

TEST(Validator, PairCountIsChecked) {
    auto c = cond_of("core");
    auto item = first_item(c, Construction::ACT);
    item.pairs.pop_back();
    EXPECT_TRUE(has(validate_pair(item, c, fixture_lexicon()), "pair_count"));
}

TEST(Validator, OverlapVerbRequiresSharedVerb) {
    auto c = cond_of("overlap_verb");
    auto item = first_item(c, Construction::DO);
    ASSERT_TRUE(validate_pair(item, c, fixture_lexicon()).empty());
    auto core = cond_of("core");
    EXPECT_TRUE(has(validate_pair(item, core, fixture_lexicon()), "condition"));
}

TEST(Validator, ImplausiblePrimeMustViolate) {
    auto c = cond_of("implausible_prime");
    auto item = first_item(c, Construction::ACT);
    ASSERT_TRUE(validate_pair(item, c, fixture_lexicon()).empty());
    // Swap in a plausible prime from a core item.
    auto plain = first_item(cond_of("core"), Construction::ACT);
    item.pairs[0] = plain.pairs[0];
    EXPECT_FALSE(validate_pair(item, c, fixture_lexicon()).empty());
}
