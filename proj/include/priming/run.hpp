#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "priming/condition.hpp"
#include "priming/lexicon.hpp"
#include "priming/metrics.hpp"
#include "priming/scoring.hpp"

namespace priming {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ScorerConfig {
    std::string kind = "ngram";  // ngram | uniform | remote
    // ngram
    int order = 3;
    double alpha = 0.1;
    std::optional<std::filesystem::path> training_file;  // one document per line
    std::map<Construction, double> training_mix{{Construction::ACT, 1}, {Construction::PASS, 1},
                                                {Construction::DO, 1}, {Construction::PO, 1}};
    std::size_t training_documents = 2000;
    std::size_t sentences_per_document = 8;
    std::optional<std::uint64_t> training_seed;  // defaults to the condition seed
    // uniform
    std::size_t vocabulary_size = 50;
    // remote
    std::string url;  // empty: take PRIMING_SCORER_URL
    ScoreMode mode = ScoreMode::Causal;
    std::size_t batch_size = 16;
    int retries = 3;
    // all
    std::size_t max_in_flight = 4;

    friend bool operator==(const ScorerConfig&, const ScorerConfig&) = default;
};

struct RunConfig {
    std::filesystem::path lexicon_dir;
    std::size_t frequency_cutoff = kDefaultFrequencyCutoff;
    std::vector<ConditionSpec> conditions;
    std::vector<Construction> structures{kTargetStructures[0], kTargetStructures[1], kTargetStructures[2],
                                         kTargetStructures[3]};
    ScorerConfig scorer;
    CiMethod ci_method = CiMethod::StudentT;
    std::optional<std::filesystem::path> output_dir;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Sections: lexicon, conditions, scorer, output. Condition entries may be tags
// ("recency_2") or objects; section-level seed / targets_per_structure /
// primes_per_target fill unset fields. "list": "all" selects the default matrix.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
// Fully explicit form; parse_run_config(run_config_to_json(c)) == c.
nlohmann::json run_config_to_json(const RunConfig& c);
// sha256 of the explicit config minus output.dir.
std::string config_hash(const RunConfig& c);

struct RunOptions {
    unsigned threads = 0;
    bool overwrite = false;  // allow a non-empty output directory
    std::function<void(const std::string&)> log;
};

struct Artifact {
    std::string path;  // relative to the output directory
    std::string sha256;
};

// Corpus file name for one (condition, structure).
std::string corpus_file_name(const ConditionSpec& c, Construction structure);

// generate: corpus/*.jsonl + manifest.json. Condition similarity thresholds are
// resolved and written back into the returned config.
RunConfig generate_corpora(RunConfig config, const std::filesystem::path& out, const RunOptions& opts = {});

// Builds the configured scorer; ngram training text comes from the file or is
// synthesized from the lexicon. `training_text` receives the documents used.
std::unique_ptr<Scorer> make_scorer(const ScorerConfig& sc, const Lexicon& lex, std::uint64_t seed,
                                    std::vector<std::string>* training_text = nullptr);

// generate -> score -> report into `out`, with manifest.json. Returns the resolved config.
RunConfig run_pipeline(RunConfig config, const std::filesystem::path& out, const RunOptions& opts = {});

// Reads the config embedded in a manifest.
RunConfig config_from_manifest(const std::filesystem::path& manifest);

}  // namespace priming
