#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "priming/generator.hpp"
#include "priming/metrics.hpp"
#include "priming/scoring.hpp"

namespace priming {

inline constexpr const char* kScoresSchema = "priming-scores/1";
inline constexpr const char* kReportSchema = "priming-report/1";
inline constexpr const char* kManifestSchema = "priming-manifest/1";

// Requests for one pair: congruent context first, then incongruent.
std::pair<ScoreRequest, ScoreRequest> pair_requests(const PrimeTargetItem& item, const PrimePair& pair,
                                                    ScoreMode mode = ScoreMode::Causal);

struct ScoreRow {
    std::string condition;  // tag
    Construction structure = Construction::ACT;
    PairedScore score;
    std::string scorer;

    friend bool operator==(const ScoreRow& a, const ScoreRow& b) {
        return a.condition == b.condition && a.structure == b.structure && a.scorer == b.scorer &&
               a.score.target_id == b.score.target_id && a.score.prime_pair_index == b.score.prime_pair_index &&
               a.score.lp_congruent == b.score.lp_congruent && a.score.lp_incongruent == b.score.lp_incongruent;
    }
};

nlohmann::json score_row_to_json(const ScoreRow& r);
ScoreRow score_row_from_json(const nlohmann::json& j);
std::vector<ScoreRow> read_scores_file(const std::filesystem::path& path);

struct ScoreOptions {
    ScoreMode mode = ScoreMode::Causal;
    std::size_t max_in_flight = 4;
    std::size_t checkpoint_every = 16;  // targets per checkpoint
    bool resume = false;                // continue from <out>.checkpoint
    bool overwrite = false;             // replace an existing file or a checkpoint that does not match
    // Called after each checkpoint with (targets done, total).
    std::function<void(std::size_t, std::size_t)> progress;
};

struct ScoreSummary {
    std::size_t targets = 0;
    std::size_t rows = 0;
    std::size_t resumed_from = 0;  // targets already done before this call
};

// Writes one row per (target, prime pair) to `out`, checkpointing whole targets
// in `<out>.checkpoint`. `corpus_digest` ties the checkpoint to its input.
ScoreSummary score_corpus(const std::vector<PrimeTargetItem>& items, const std::string& corpus_digest,
                          const Scorer& scorer, const std::filesystem::path& out, const ScoreOptions& opts = {});

std::filesystem::path checkpoint_path(const std::filesystem::path& scores);

// Groups rows by (condition, structure) and aggregates each against its
// alternation partner. Throws MetricsError on duplicate rows or on score files
// that disagree about a condition's scorer or a target's structure.
std::vector<ConditionReport> build_reports(const std::vector<ScoreRow>& rows, CiMethod method = CiMethod::StudentT);

struct CochranNote {
    double z = 2.576;
    double margin = 0.01;
    double p = 0.5;
};

std::string cochran_note_text(const CochranNote& c = {});

std::string report_csv(const std::vector<ConditionReport>& reports);
nlohmann::json report_json(const std::vector<ConditionReport>& reports, CiMethod method,
                           const std::string& scorer, const CochranNote& cochran = {});

// report.csv, report.json and plots/*.csv under `dir`. Returns the files written.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir,
                                                const std::vector<ConditionReport>& reports, CiMethod method,
                                                const std::string& scorer);

// Exclusive lock on a directory, released on destruction.
class DirectoryLock {
public:
    explicit DirectoryLock(const std::filesystem::path& dir);
    ~DirectoryLock();
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    std::filesystem::path path_;
};

class LockedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Canonical dump used for hashing configurations.
std::string canonical_dump(const nlohmann::json& j);

}  // namespace priming
