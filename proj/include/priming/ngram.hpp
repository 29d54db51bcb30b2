#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "priming/scoring.hpp"

namespace priming {

// Fixed-order n-gram model with additive smoothing:
//   P(w | h) = (c(h, w) + alpha) / (c(h) + alpha * V)
// where h is the previous order-1 tokens (BOS-padded) and V counts the word
// types seen in training plus </s> and <unk>. Causal mode only.
class NGramModel : public Scorer {
public:
    // Each corpus entry is one document; documents are BOS-padded independently.
    static NGramModel train(const std::vector<std::string>& corpus, int order, double alpha);

    int order() const { return order_; }
    double alpha() const { return alpha_; }
    std::size_t vocabulary_size() const { return vocab_.size(); }
    // Sorted; includes </s> and <unk>, never <s>.
    const std::vector<std::string>& vocabulary() const { return vocab_; }

    // `history` is the full left context; only its last order-1 tokens matter and
    // missing positions are <s>. Tokens outside the vocabulary act as <unk>.
    double probability(std::span<const std::string> history, std::string_view token) const;

    ScoredSequence score(const ScoreRequest& request) const override;
    std::string id() const override;
    // sha256 of the training corpus.
    const std::string& corpus_digest() const { return corpus_digest_; }

private:
    NGramModel() = default;

    struct History {
        std::uint64_t total = 0;
        std::unordered_map<std::uint32_t, std::uint64_t> next;
    };

    std::uint32_t id_of(std::string_view token) const;
    std::string history_key(std::span<const std::uint32_t> ids, std::size_t end) const;
    double prob_ids(std::span<const std::uint32_t> ids, std::size_t pos) const;

    int order_ = 1;
    double alpha_ = 1.0;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::uint32_t bos_ = 0;
    std::uint32_t unk_ = 0;
    std::unordered_map<std::string, History> counts_;
    std::string corpus_digest_;
};

}  // namespace priming
