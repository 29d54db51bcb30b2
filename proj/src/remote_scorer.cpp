#include "priming/remote_scorer.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>

namespace priming {

using nlohmann::json;

namespace {

constexpr double kSumTolerance = 1e-6;

}  // namespace

json request_to_json(const ScoreRequest& r) {
    return json{{"context", r.context}, {"target", r.target}, {"mode", to_string(r.mode)}};
}

ScoredSequence parse_scored_sequence(const json& j) {
    if (!j.is_object()) throw ScorerError("response is not a JSON object");
    ScoredSequence s;
    try {
        s.tokens = j.at("tokens").get<std::vector<std::string>>();
        for (const auto& x : j.at("token_log_probs")) {
            if (!x.is_number()) throw ScorerError("token_log_probs contains a non-number");
            s.token_log_probs.push_back(x.get<double>());
        }
        if (!j.at("log_prob").is_number()) throw ScorerError("log_prob is not a number");
        s.log_prob = j.at("log_prob").get<double>();
        s.model_id = j.at("model_id").get<std::string>();
    } catch (const json::exception& e) {
        throw ScorerError(std::string("malformed response: ") + e.what());
    }
    check_scored_sequence(s, kSumTolerance);
    return s;
}

RemoteScorer::RemoteScorer(RemoteScorerOptions options) : options_(std::move(options)) {
    if (options_.base_url.empty())
        throw ScorerError(std::string("no scorer URL (set ") + kScorerUrlEnv + " or pass --scorer-url)");
    while (options_.base_url.size() > 1 && options_.base_url.back() == '/') options_.base_url.pop_back();
    if (options_.batch_size == 0) options_.batch_size = 1;
}

json RemoteScorer::get(const std::string& path) const {
    httplib::Client cli(options_.base_url);
    cli.set_connection_timeout(options_.timeout);
    cli.set_read_timeout(options_.timeout);
    auto res = cli.Get(path);
    const std::string where = "GET " + options_.base_url + path;
    if (!res) throw ScorerError(where + ": " + httplib::to_string(res.error()));
    if (res->status != 200) throw ScorerError(where + ": HTTP " + std::to_string(res->status));
    try {
        return json::parse(res->body);
    } catch (const json::exception& e) {
        throw ScorerError(where + ": invalid JSON: " + e.what());
    }
}

json RemoteScorer::post(const std::string& path, const json& body) const {
    const std::string where = "POST " + options_.base_url + path;
    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
        if (attempt) std::this_thread::sleep_for(options_.backoff * attempt);
        httplib::Client cli(options_.base_url);
        cli.set_connection_timeout(options_.timeout);
        cli.set_read_timeout(options_.timeout);
        auto res = cli.Post(path, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw ScorerError(where + ": HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            throw ScorerError(where + ": invalid JSON: " + e.what());
        }
    }
    throw ScorerError(where + ": failed after " + std::to_string(options_.retries + 1) + " attempts: " + last_error);
}

HealthInfo RemoteScorer::health() const {
    const auto j = get("/v1/health");
    HealthInfo h;
    try {
        h.model_id = j.at("model_id").get<std::string>();
        h.modes = j.at("modes").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ScorerError("GET " + options_.base_url + "/v1/health: malformed body: " + e.what());
    }
    return h;
}

void RemoteScorer::connect() {
    const auto h = health();
    const auto mode = std::string(to_string(options_.mode));
    if (std::find(h.modes.begin(), h.modes.end(), mode) == h.modes.end())
        throw ScorerError(options_.base_url + ": model '" + h.model_id + "' does not offer mode " + mode);
    model_id_ = h.model_id;
}

ScoredSequence RemoteScorer::score(const ScoreRequest& request) const {
    auto s = parse_scored_sequence(post("/v1/score", request_to_json(request)));
    if (!model_id_.empty() && s.model_id != model_id_)
        throw ScorerError("response model_id '" + s.model_id + "' differs from '" + model_id_ + "'");
    return s;
}

std::vector<ScoredSequence> RemoteScorer::score_many(std::span<const ScoreRequest> requests) const {
    if (requests.size() <= 1 || options_.batch_size == 1) return Scorer::score_many(requests);
    json items = json::array();
    for (const auto& r : requests) items.push_back(request_to_json(r));
    const auto body = post("/v1/score_batch", json{{"items", items}});
    if (!body.is_object() || !body.contains("items") || !body.at("items").is_array())
        throw ScorerError("score_batch response has no items array");
    const auto& got = body.at("items");
    if (got.size() != requests.size())
        throw ScorerError("score_batch returned " + std::to_string(got.size()) + " items for " +
                          std::to_string(requests.size()) + " requests");
    std::vector<ScoredSequence> out;
    out.reserve(got.size());
    for (const auto& j : got) {
        out.push_back(parse_scored_sequence(j));
        if (!model_id_.empty() && out.back().model_id != model_id_)
            throw ScorerError("response model_id '" + out.back().model_id + "' differs from '" + model_id_ + "'");
    }
    return out;
}

}  // namespace priming
