#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "priming/scoring.hpp"

namespace priming {

// Env var holding the scorer-service base URL; a CLI flag overrides it.
inline constexpr const char* kScorerUrlEnv = "PRIMING_SCORER_URL";

struct RemoteScorerOptions {
    std::string base_url;  // "http://host:port"
    ScoreMode mode = ScoreMode::Causal;
    std::size_t batch_size = 16;  // items per /v1/score_batch call; 1 uses /v1/score
    int retries = 3;              // extra attempts after a transport error or 5xx
    std::chrono::milliseconds backoff{100};
    std::chrono::milliseconds timeout{60000};
};

struct HealthInfo {
    std::string model_id;
    std::vector<std::string> modes;
};

// Client for the scorer-service wire protocol. Responses that break the
// ScoredSequence invariants are rejected with ScorerError, never repaired.
class RemoteScorer : public Scorer {
public:
    explicit RemoteScorer(RemoteScorerOptions options);

    // GET /v1/health. Throws ScorerError naming the endpoint on failure.
    HealthInfo health() const;
    // health() plus a check that the configured mode is offered; caches model_id.
    void connect();

    ScoredSequence score(const ScoreRequest& request) const override;
    std::vector<ScoredSequence> score_many(std::span<const ScoreRequest> requests) const override;
    std::size_t preferred_batch() const override { return options_.batch_size; }
    std::string id() const override { return model_id_; }

    const RemoteScorerOptions& options() const { return options_; }

private:
    nlohmann::json post(const std::string& path, const nlohmann::json& body) const;
    nlohmann::json get(const std::string& path) const;

    RemoteScorerOptions options_;
    std::string model_id_;
};

nlohmann::json request_to_json(const ScoreRequest& r);
// Parses and validates one response object (sum tolerance 1e-6).
ScoredSequence parse_scored_sequence(const nlohmann::json& j);

}  // namespace priming
