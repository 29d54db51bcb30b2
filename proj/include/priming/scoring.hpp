#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace priming {

enum class ScoreMode : std::uint8_t { Causal, MaskedPll };

std::string_view to_string(ScoreMode m);
std::optional<ScoreMode> parse_score_mode(std::string_view s);

struct ScoreRequest {
    std::string context;  // may be empty
    std::string target;
    ScoreMode mode = ScoreMode::Causal;

    friend bool operator==(const ScoreRequest&, const ScoreRequest&) = default;
};

struct ScoredSequence {
    std::vector<std::string> tokens;  // target side only
    std::vector<double> token_log_probs;
    double log_prob = 0.0;
    std::string model_id;

    friend bool operator==(const ScoredSequence&, const ScoredSequence&) = default;
};

class ScorerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BatchScoreError : public ScorerError {
public:
    explicit BatchScoreError(std::vector<std::pair<std::size_t, std::string>> failures);
    // (request index, message), ascending by index.
    const std::vector<std::pair<std::size_t, std::string>>& failures() const { return failures_; }

private:
    std::vector<std::pair<std::size_t, std::string>> failures_;
};

// Implementations must be safe to call concurrently.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual ScoredSequence score(const ScoreRequest& request) const = 0;
    // Scores several requests in one round trip where the backend supports it.
    virtual std::vector<ScoredSequence> score_many(std::span<const ScoreRequest> requests) const;
    // Largest group score_many should receive; 1 means no batching benefit.
    virtual std::size_t preferred_batch() const { return 1; }
    // model_id, or a parameter string for in-repo scorers.
    virtual std::string id() const = 0;
};

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

// Lowercase, split on whitespace, turn sentence-final periods into </s>. A
// non-empty text that does not end in a period still ends with </s>.
std::vector<std::string> tokenize(std::string_view text);

// Context and target as one string, per the concatenation rule.
std::string concatenate(std::string_view context, std::string_view target);

// Every target token gets probability 1/V regardless of context.
class UniformScorer : public Scorer {
public:
    explicit UniformScorer(std::size_t vocabulary_size);
    ScoredSequence score(const ScoreRequest& request) const override;
    std::string id() const override;

private:
    std::size_t v_;
};

// Results are positionally aligned and identical to scoring one by one,
// whatever max_in_flight is. Throws BatchScoreError listing every failed index.
std::vector<ScoredSequence> batch_score(std::span<const ScoreRequest> requests, const Scorer& scorer,
                                        std::size_t max_in_flight);

// Throws ScorerError if the sequence breaks the ScoredSequence invariants
// (lengths, finiteness, log-probs <= 0, sum within `tolerance`).
void check_scored_sequence(const ScoredSequence& s, double tolerance);

}  // namespace priming
