#include "priming/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <mutex>
#include <thread>

namespace priming {

std::string_view to_string(ScoreMode m) { return m == ScoreMode::Causal ? "causal" : "masked_pll"; }

std::optional<ScoreMode> parse_score_mode(std::string_view s) {
    if (s == "causal") return ScoreMode::Causal;
    if (s == "masked_pll") return ScoreMode::MaskedPll;
    return std::nullopt;
}

BatchScoreError::BatchScoreError(std::vector<std::pair<std::size_t, std::string>> failures)
    : ScorerError([&] {
          std::string msg = std::to_string(failures.size()) + " request(s) failed";
          for (std::size_t i = 0; i < failures.size() && i < 5; ++i)
              msg += "; #" + std::to_string(failures[i].first) + ": " + failures[i].second;
          return msg;
      }()),
      failures_(std::move(failures)) {}

std::vector<ScoredSequence> Scorer::score_many(std::span<const ScoreRequest> requests) const {
    std::vector<ScoredSequence> out;
    out.reserve(requests.size());
    for (const auto& r : requests) out.push_back(score(r));
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string word;
    auto flush = [&] {
        if (word.empty()) return;
        std::size_t periods = 0;
        while (!word.empty() && word.back() == '.') {
            word.pop_back();
            ++periods;
        }
        if (!word.empty()) out.push_back(word);
        if (periods) out.emplace_back(kEos);
        word.clear();
    };
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    flush();
    if (!out.empty() && out.back() != kEos) out.emplace_back(kEos);
    return out;
}

std::string concatenate(std::string_view context, std::string_view target) {
    if (context.empty()) return std::string(target);
    return std::string(context) + " " + std::string(target);
}

UniformScorer::UniformScorer(std::size_t vocabulary_size) : v_(vocabulary_size) {
    if (v_ == 0) throw std::invalid_argument("uniform scorer needs a positive vocabulary size");
}

ScoredSequence UniformScorer::score(const ScoreRequest& request) const {
    if (request.mode != ScoreMode::Causal) throw ScorerError("uniform scorer supports causal mode only");
    ScoredSequence out;
    out.model_id = id();
    out.tokens = tokenize(request.target);
    const double lp = -std::log(static_cast<double>(v_));
    out.token_log_probs.assign(out.tokens.size(), lp);
    for (double x : out.token_log_probs) out.log_prob += x;
    return out;
}

std::string UniformScorer::id() const { return "uniform(V=" + std::to_string(v_) + ")"; }

std::vector<ScoredSequence> batch_score(std::span<const ScoreRequest> requests, const Scorer& scorer,
                                        std::size_t max_in_flight) {
    if (max_in_flight == 0) throw std::invalid_argument("max_in_flight must be positive");
    std::vector<ScoredSequence> out(requests.size());
    const std::size_t chunk = std::max<std::size_t>(1, scorer.preferred_batch());
    const std::size_t chunks = (requests.size() + chunk - 1) / chunk;

    std::mutex mutex;
    std::vector<std::pair<std::size_t, std::string>> failures;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < chunks;) {
            const std::size_t begin = c * chunk;
            const std::size_t end = std::min(requests.size(), begin + chunk);
            try {
                auto got = scorer.score_many(requests.subspan(begin, end - begin));
                if (got.size() != end - begin) throw ScorerError("scorer returned a misaligned batch");
                std::move(got.begin(), got.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
            } catch (const std::exception& e) {
                std::lock_guard lock(mutex);
                for (std::size_t i = begin; i < end; ++i) failures.emplace_back(i, e.what());
            }
        }
    };
    const std::size_t threads = std::min(max_in_flight, chunks);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (!failures.empty()) {
        std::sort(failures.begin(), failures.end());
        throw BatchScoreError(std::move(failures));
    }
    return out;
}

void check_scored_sequence(const ScoredSequence& s, double tolerance) {
    if (s.tokens.size() != s.token_log_probs.size())
        throw ScorerError("tokens and token_log_probs differ in length (" + std::to_string(s.tokens.size()) + " vs " +
                          std::to_string(s.token_log_probs.size()) + ")");
    if (s.tokens.empty()) throw ScorerError("empty token list");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.token_log_probs.size(); ++i) {
        const double x = s.token_log_probs[i];
        if (!std::isfinite(x)) throw ScorerError("non-finite log-prob at token " + std::to_string(i));
        if (x > 0.0) throw ScorerError("positive log-prob at token " + std::to_string(i));
        sum += x;
    }
    if (!std::isfinite(s.log_prob)) throw ScorerError("non-finite log_prob");
    if (std::abs(sum - s.log_prob) > tolerance)
        throw ScorerError("log_prob " + std::to_string(s.log_prob) + " disagrees with token sum " +
                          std::to_string(sum));
}

}  // namespace priming
