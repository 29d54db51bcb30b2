#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <thread>

#include <httplib.h>

#include "priming/remote_scorer.hpp"

using namespace priming;
using nlohmann::json;

namespace {

// In-process stand-in for the scorer service. Each token costs -1 nat.
class FakeService {
public:
    std::atomic<int> calls{0};
    std::atomic<int> failures_left{0};  // answer 503 this many times first
    std::atomic<int> status_override{0};
    std::atomic<bool> corrupt{false};
    std::atomic<bool> short_batch{false};
    std::string model_id = "fake-lm";

    FakeService() {
        server_.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(json{{"model_id", model_id}, {"modes", {"causal"}}}.dump(), "application/json");
        });
        server_.Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
            if (!gate(res)) return;
            res.set_content(answer(json::parse(req.body)).dump(), "application/json");
        });
        server_.Post("/v1/score_batch", [this](const httplib::Request& req, httplib::Response& res) {
            if (!gate(res)) return;
            const auto body = json::parse(req.body);
            json items = json::array();
            for (const auto& it : body.at("items")) items.push_back(answer(it));
            if (short_batch) items.erase(items.end() - 1);
            res.set_content(json{{"items", items}}.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeService() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    bool gate(httplib::Response& res) {
        ++calls;
        if (failures_left > 0) {
            --failures_left;
            res.status = 503;
            return false;
        }
        if (status_override) {
            res.status = status_override;
            res.set_content("bad request", "text/plain");
            return false;
        }
        return true;
    }

    json answer(const json& req) {
        std::vector<std::string> tokens;
        std::istringstream in(req.at("target").get<std::string>());
        for (std::string w; in >> w;) tokens.push_back(w);
        std::vector<double> lps(tokens.size(), -1.0);
        double total = -static_cast<double>(tokens.size());
        if (corrupt) lps.back() = 0.5, total += 1.5;
        return json{{"tokens", tokens}, {"token_log_probs", lps}, {"log_prob", total}, {"model_id", model_id}};
    }

    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

RemoteScorerOptions opts(const std::string& url, std::size_t batch = 4) {
    RemoteScorerOptions o;
    o.base_url = url;
    o.batch_size = batch;
    o.retries = 2;
    o.backoff = std::chrono::milliseconds(1);
    o.timeout = std::chrono::milliseconds(2000);
    return o;
}

}  // namespace

TEST(RemoteScorer, ScoresThroughTheService) {
    FakeService svc;
    RemoteScorer r(opts(svc.url()));
    r.connect();
    EXPECT_EQ(r.id(), "fake-lm");
    auto s = r.score({"A b.", "c d e"});
    EXPECT_EQ(s.tokens.size(), 3u);
    EXPECT_DOUBLE_EQ(s.log_prob, -3.0);
}

TEST(RemoteScorer, BatchesAreAligned) {
    FakeService svc;
    RemoteScorer r(opts(svc.url(), 8));
    r.connect();
    std::vector<ScoreRequest> reqs;
    for (int i = 1; i <= 20; ++i) reqs.push_back({"", std::string(static_cast<std::size_t>(i), 'x') + std::string(" y", static_cast<std::size_t>(2 * (i % 3)))});
    auto got = batch_score(reqs, r, 3);
    ASSERT_EQ(got.size(), reqs.size());
    for (std::size_t i = 0; i < reqs.size(); ++i) EXPECT_EQ(got[i], r.score(reqs[i]));
}

TEST(RemoteScorer, RejectsInvalidResponses) {
    FakeService svc;
    RemoteScorer r(opts(svc.url()));
    r.connect();
    svc.corrupt = true;
    EXPECT_THROW(r.score({"", "a b"}), ScorerError);
    svc.corrupt = false;
    svc.short_batch = true;
    std::vector<ScoreRequest> reqs{{"", "a"}, {"", "b"}, {"", "c"}};
    EXPECT_THROW(r.score_many(reqs), ScorerError);
}

TEST(RemoteScorer, RetriesServerErrorsOnly) {
    FakeService svc;
    RemoteScorer r(opts(svc.url()));
    svc.failures_left = 2;
    EXPECT_NO_THROW(r.score({"", "a"}));
    EXPECT_EQ(svc.calls, 3);

    svc.calls = 0;
    svc.failures_left = 10;
    EXPECT_THROW(r.score({"", "a"}), ScorerError);
    EXPECT_EQ(svc.calls, 3);

    svc.calls = 0;
    svc.failures_left = 0;
    svc.status_override = 422;
    EXPECT_THROW(r.score({"", "a"}), ScorerError);
    EXPECT_EQ(svc.calls, 1);
}

TEST(RemoteScorer, ModelChangeIsAnError) {
    FakeService svc;
    RemoteScorer r(opts(svc.url()));
    r.connect();
    svc.model_id = "other";
    EXPECT_THROW(r.score({"", "a"}), ScorerError);
}

TEST(RemoteScorer, HealthFailureNamesEndpoint) {
    int port;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    RemoteScorer r(opts("http://127.0.0.1:" + std::to_string(port)));
    try {
        r.connect();
        FAIL();
    } catch (const ScorerError& e) {
        EXPECT_NE(std::string(e.what()).find("/v1/health"), std::string::npos) << e.what();
    }
}

TEST(RemoteScorer, MissingModeIsRejected) {
    FakeService svc;
    auto o = opts(svc.url());
    o.mode = ScoreMode::MaskedPll;
    RemoteScorer r(o);
    EXPECT_THROW(r.connect(), ScorerError);
}

TEST(RemoteScorer, NeedsUrl) { EXPECT_THROW(RemoteScorer(opts("")), ScorerError); }

TEST(WireFormat, RequestAndResponse) {
    EXPECT_EQ(request_to_json({"c.", "t", ScoreMode::MaskedPll}),
              (json{{"context", "c."}, {"target", "t"}, {"mode", "masked_pll"}}));
    auto ok = json{{"tokens", {"a"}}, {"token_log_probs", {-0.5}}, {"log_prob", -0.5}, {"model_id", "m"}};
    EXPECT_EQ(parse_scored_sequence(ok).log_prob, -0.5);
    auto bad = ok;
    bad["log_prob"] = -0.6;
    EXPECT_THROW(parse_scored_sequence(bad), ScorerError);
    bad = ok;
    bad.erase("tokens");
    EXPECT_THROW(parse_scored_sequence(bad), ScorerError);
    bad = ok;
    bad["token_log_probs"] = {"x"};
    EXPECT_THROW(parse_scored_sequence(bad), ScorerError);
}
