#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "priming/condition.hpp"
#include "priming/lexicon.hpp"
#include "priming/rng.hpp"
#include "priming/sentence.hpp"

namespace priming {

// One congruent context and its single-sentence incongruent counterpart.
struct PrimePair {
    std::vector<Sentence> congruent;
    std::vector<Sentence> incongruent;

    // The last non-padding congruent sentence; its alternate is the incongruent context.
    const Sentence& prime() const;
};

struct PrimeTargetItem {
    std::string id;
    Sentence target;
    std::vector<PrimePair> pairs;
    ConditionSpec condition;

    Construction structure() const { return target.spec.construction; }
    Alternation alternation() const { return alternation_of(structure()); }
};

struct GenerationStats {
    std::size_t candidates = 0;       // target candidates drawn
    std::size_t skipped_targets = 0;  // candidates dropped because a prime slot was exhausted
    std::map<std::string, std::size_t> failures;  // constraint -> count of exhausted slots
};

struct Corpus {
    ConditionSpec condition;
    Construction structure = Construction::ACT;
    std::vector<PrimeTargetItem> items;
    GenerationStats stats;

    std::size_t pair_count() const;
};

class GenerationError : public std::runtime_error {
public:
    GenerationError(const std::string& constraint, const std::string& message)
        : std::runtime_error(message), constraint_(constraint) {}
    const std::string& constraint() const { return constraint_; }

private:
    std::string constraint_;
};

struct GenerateOptions {
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Percentile used to turn the core similarity distribution into a threshold.
inline constexpr double kSimilarityPercentile = 90.0;
inline constexpr std::size_t kCalibrationTargets = 150;

// Threshold from role-matched cosines of a small core corpus built with `seed`.
double calibrate_similarity_threshold(const Lexicon& lex, std::uint64_t seed,
                                      std::size_t targets_per_structure = kCalibrationTargets,
                                      const GenerateOptions& opts = {});

// Role-matched cosines (verb-verb, agent-agent, ...) of every congruent prime in a corpus.
std::vector<double> role_matched_similarities(const Corpus& corpus, const Lexicon& lex);

// Corpus for one target structure. Similarity conditions need a resolved threshold
// (see resolve_condition).
Corpus build_structure_corpus(const ConditionSpec& cond, Construction structure, const Lexicon& lex,
                              const GenerateOptions& opts = {});

// Fills in calibrated parameters (the similarity threshold) and validates.
ConditionSpec resolve_condition(ConditionSpec cond, const Lexicon& lex, const GenerateOptions& opts = {});

// One corpus per target structure, in ACT, PASS, DO, PO order.
std::vector<Corpus> build_corpus(const ConditionSpec& cond, const Lexicon& lex, const GenerateOptions& opts = {});

// "You might come"-style filler.
Sentence padding_sentence(const Lexicon& lex, Rng& rng);

// Running-text training documents whose sentences follow the given construction
// weights (e.g. {DO: 0.9, PO: 0.1}). Each document is `sentences_per_document`
// sentences joined by the concatenation rule.
std::vector<std::string> make_training_text(const Lexicon& lex, const std::map<Construction, double>& mix,
                                            std::size_t documents, std::size_t sentences_per_document,
                                            std::uint64_t seed);

}  // namespace priming
