#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "priming/ngram.hpp"
#include "priming/scoring.hpp"

using namespace priming;

namespace {

using Tokens = std::vector<std::string>;

double sum_log_probs(const NGramModel& m, const Tokens& tokens) {
    double total = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        total += std::log(m.probability(std::span(tokens.data(), i), tokens[i]));
    return total;
}

// Random sentences over a small vocabulary, some words unseen in training.
std::string random_text(std::mt19937_64& g, std::size_t sentences) {
    static const Tokens words{"the", "a", "cat", "dog", "gave", "bone", "to", "was", "seen", "by", "zebra", "quartz"};
    std::string out;
    for (std::size_t s = 0; s < sentences; ++s) {
        const auto len = 2 + g() % 6;
        for (std::size_t i = 0; i < len; ++i) {
            if (!out.empty()) out += ' ';
            out += words[g() % words.size()];
        }
        out += '.';
    }
    return out;
}

NGramModel training_model(int order, double alpha) {
    std::mt19937_64 g(42);
    std::vector<std::string> docs;
    for (int i = 0; i < 200; ++i) {
        auto d = random_text(g, 3);
        if (d.find("zebra") == std::string::npos && d.find("quartz") == std::string::npos) docs.push_back(d);
    }
    return NGramModel::train(docs, order, alpha);
}

}  // namespace

TEST(Tokenize, LowercasesAndMarksSentenceEnds) {
    EXPECT_EQ(tokenize("The cat sat. A dog ran."), (Tokens{"the", "cat", "sat", "</s>", "a", "dog", "ran", "</s>"}));
    EXPECT_EQ(tokenize("The cat sat"), (Tokens{"the", "cat", "sat", "</s>"}));
    EXPECT_EQ(tokenize("  "), Tokens{});
    EXPECT_EQ(tokenize(""), Tokens{});
}

TEST(Concatenate, JoinsWithSpace) {
    EXPECT_EQ(concatenate("", "B."), "B.");
    EXPECT_EQ(concatenate("A.", "B."), "A. B.");
}

TEST(UniformScorer, ClosedForm) {
    UniformScorer u(50);
    auto s = u.score({"Some context here.", "a b"});
    ASSERT_EQ(s.tokens.size(), 3u);
    EXPECT_NEAR(s.log_prob, 3.0 * std::log(1.0 / 50.0), 1e-12);
    EXPECT_NEAR(s.log_prob, -11.7361, 1e-4);
    EXPECT_EQ(s.model_id, "uniform(V=50)");
    EXPECT_THROW(u.score({"", "a", ScoreMode::MaskedPll}), ScorerError);
}

TEST(NGram, BigramHandValues) {
    // Counts for {"a b", "a c"} with <s> padding: c(<s>)=2, c(<s>,a)=2, c(a)=2,
    // c(a,b)=1, c(b)=1, c(b,</s>)=1. V = {a, b, c, </s>, <unk>} = 5.
    for (double alpha : {0.1, 0.5, 1.0, 2.0}) {
        auto m = NGramModel::train({"a b", "a c"}, 2, alpha);
        ASSERT_EQ(m.vocabulary_size(), 5u);
        const double expected = std::log((2 + alpha) / (2 + 5 * alpha)) + std::log((1 + alpha) / (2 + 5 * alpha)) +
                                std::log((1 + alpha) / (1 + 5 * alpha));
        auto s = m.score({"", "a b"});
        EXPECT_EQ(s.tokens, (Tokens{"a", "b", "</s>"}));
        EXPECT_NEAR(s.log_prob, expected, 1e-12) << alpha;
        EXPECT_NEAR(std::accumulate(s.token_log_probs.begin(), s.token_log_probs.end(), 0.0), s.log_prob, 1e-12);
    }
}

TEST(NGram, SingleDocumentVocabulary) {
    auto m = NGramModel::train({"a b"}, 2, 0.5);
    EXPECT_EQ(m.vocabulary(), (Tokens{"</s>", "<unk>", "a", "b"}));
    const Tokens h{"a"};
    EXPECT_NEAR(m.probability(h, "b"), 1.5 / 3.0, 1e-15);
}

TEST(NGram, DistributionsNormalize) {
    auto m = training_model(3, 0.1);
    std::mt19937_64 g(7);
    for (int i = 0; i < 100; ++i) {
        const auto history = tokenize(random_text(g, 1 + g() % 2));
        const auto cut = g() % (history.size() + 1);
        std::span<const std::string> h(history.data(), cut);
        double total = 0.0;
        for (const auto& w : m.vocabulary()) {
            const double p = m.probability(h, w);
            EXPECT_GT(p, 0.0);
            total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(NGram, UnseenWordsActAsUnk) {
    auto m = training_model(2, 0.1);
    const Tokens h{"the"};
    EXPECT_EQ(m.probability(h, "zebra"), m.probability(h, "<unk>"));
    EXPECT_EQ(m.probability(h, "zebra"), m.probability(h, "quartz"));
}

TEST(NGram, AdditivityAgainstWholeSequence) {
    auto m = training_model(3, 0.1);
    std::mt19937_64 g(99);
    for (int i = 0; i < 300; ++i) {
        const auto ctx = (g() % 4 == 0) ? std::string() : random_text(g, 1 + g() % 3);
        const auto tgt = random_text(g, 1);
        const double whole = sum_log_probs(m, tokenize(concatenate(ctx, tgt)));
        const double context_only = sum_log_probs(m, tokenize(ctx));
        EXPECT_NEAR(m.score({ctx, tgt}).log_prob, whole - context_only, 1e-9);
    }
}

TEST(NGram, MoreSmoothingFlattens) {
    // A seen bigram loses probability as alpha grows; an unseen one gains.
    auto low = NGramModel::train({"a b", "a c"}, 2, 0.01);
    auto high = NGramModel::train({"a b", "a c"}, 2, 10.0);
    const Tokens h{"a"};
    EXPECT_GT(low.probability(h, "b"), high.probability(h, "b"));
    EXPECT_LT(low.probability(h, "a"), high.probability(h, "a"));
    EXPECT_GT(high.probability(h, "a"), 0.0);
}

TEST(NGram, TrainingErrors) {
    EXPECT_THROW(NGramModel::train({}, 3, 0.1), std::invalid_argument);
    EXPECT_THROW(NGramModel::train({"a"}, 0, 0.1), std::invalid_argument);
    EXPECT_THROW(NGramModel::train({"a"}, 3, 0.0), std::invalid_argument);
    EXPECT_THROW(NGramModel::train({"a"}, 3, -1.0), std::invalid_argument);
}

TEST(NGram, IdAndDeterminism) {
    auto a = training_model(3, 0.1);
    auto b = training_model(3, 0.1);
    EXPECT_EQ(a.id(), b.id());
    EXPECT_EQ(a.id().rfind("ngram(order=3,alpha=0.1,corpus=", 0), 0u) << a.id();
    EXPECT_EQ(a.score({"The cat.", "A dog."}), b.score({"The cat.", "A dog."}));
    EXPECT_THROW(a.score({"", "x", ScoreMode::MaskedPll}), ScorerError);
}

TEST(BatchScore, InFlightDoesNotChangeResults) {
    auto m = training_model(3, 0.1);
    std::mt19937_64 g(5);
    std::vector<ScoreRequest> reqs;
    for (int i = 0; i < 1000; ++i) reqs.push_back({random_text(g, 1), random_text(g, 1)});
    auto one = batch_score(reqs, m, 1);
    auto eight = batch_score(reqs, m, 8);
    ASSERT_EQ(one.size(), reqs.size());
    EXPECT_EQ(one, eight);
    for (std::size_t i = 0; i < reqs.size(); i += 97) EXPECT_EQ(one[i], m.score(reqs[i]));
}

namespace {

class FlakyScorer : public Scorer {
public:
    ScoredSequence score(const ScoreRequest& r) const override {
        if (r.target.find("bad") != std::string::npos) throw ScorerError("refused " + r.target);
        return UniformScorer(10).score(r);
    }
    std::string id() const override { return "flaky"; }
};

}  // namespace

TEST(BatchScore, ReportsEveryFailedIndex) {
    std::vector<ScoreRequest> reqs{{"", "ok"}, {"", "bad one"}, {"", "ok"}, {"", "bad two"}};
    try {
        batch_score(reqs, FlakyScorer{}, 3);
        FAIL();
    } catch (const BatchScoreError& e) {
        ASSERT_EQ(e.failures().size(), 2u);
        EXPECT_EQ(e.failures()[0].first, 1u);
        EXPECT_EQ(e.failures()[1].first, 3u);
    }
}

TEST(CheckScoredSequence, RejectsBrokenInvariants) {
    ScoredSequence s{{"a", "b"}, {-1.0, -2.0}, -3.0, "m"};
    EXPECT_NO_THROW(check_scored_sequence(s, 1e-9));
    auto t = s;
    t.token_log_probs.pop_back();
    EXPECT_THROW(check_scored_sequence(t, 1e-9), ScorerError);
    t = s;
    t.token_log_probs[0] = 0.5;
    t.log_prob = -1.5;
    EXPECT_THROW(check_scored_sequence(t, 1e-9), ScorerError);
    t = s;
    t.token_log_probs[1] = std::nan("");
    EXPECT_THROW(check_scored_sequence(t, 1e-9), ScorerError);
    t = s;
    t.log_prob = -3.1;
    EXPECT_THROW(check_scored_sequence(t, 1e-9), ScorerError);
}
