#include "priming/ngram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "priming/digest.hpp"

namespace priming {

NGramModel NGramModel::train(const std::vector<std::string>& corpus, int order, double alpha) {
    if (corpus.empty()) throw std::invalid_argument("n-gram training corpus is empty");
    if (order < 1) throw std::invalid_argument("n-gram order must be >= 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("n-gram alpha must be positive");

    NGramModel m;
    m.order_ = order;
    m.alpha_ = alpha;

    std::vector<std::vector<std::string>> docs;
    std::set<std::string> types{std::string(kEos), std::string(kUnk)};
    std::string joined;
    for (const auto& d : corpus) {
        docs.push_back(tokenize(d));
        types.insert(docs.back().begin(), docs.back().end());
        joined += d;
        joined += '\n';
    }
    m.vocab_.assign(types.begin(), types.end());
    for (std::uint32_t i = 0; i < m.vocab_.size(); ++i) m.index_.emplace(m.vocab_[i], i);
    m.bos_ = static_cast<std::uint32_t>(m.vocab_.size());
    m.unk_ = m.index_.at(std::string(kUnk));
    m.corpus_digest_ = sha256_hex(joined);

    const std::size_t pad = static_cast<std::size_t>(order - 1);
    for (const auto& d : docs) {
        std::vector<std::uint32_t> ids(pad, m.bos_);
        for (const auto& t : d) ids.push_back(m.index_.at(t));
        for (std::size_t pos = pad; pos < ids.size(); ++pos) {
            auto& h = m.counts_[m.history_key(ids, pos)];
            ++h.total;
            ++h.next[ids[pos]];
        }
    }
    return m;
}

std::uint32_t NGramModel::id_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? unk_ : it->second;
}

std::string NGramModel::history_key(std::span<const std::uint32_t> ids, std::size_t end) const {
    const std::size_t n = static_cast<std::size_t>(order_ - 1);
    std::string key(n * sizeof(std::uint32_t), '\0');
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = ids[end - n + i];
        for (std::size_t b = 0; b < sizeof v; ++b) key[i * sizeof v + b] = static_cast<char>((v >> (8 * b)) & 0xff);
    }
    return key;
}

double NGramModel::prob_ids(std::span<const std::uint32_t> ids, std::size_t pos) const {
    const double v = static_cast<double>(vocab_.size());
    auto it = counts_.find(history_key(ids, pos));
    double c_hw = 0.0, c_h = 0.0;
    if (it != counts_.end()) {
        c_h = static_cast<double>(it->second.total);
        auto w = it->second.next.find(ids[pos]);
        if (w != it->second.next.end()) c_hw = static_cast<double>(w->second);
    }
    return (c_hw + alpha_) / (c_h + alpha_ * v);
}

double NGramModel::probability(std::span<const std::string> history, std::string_view token) const {
    std::vector<std::uint32_t> ids(static_cast<std::size_t>(order_ - 1), bos_);
    for (const auto& t : history) ids.push_back(id_of(t));
    ids.push_back(id_of(token));
    return prob_ids(ids, ids.size() - 1);
}

ScoredSequence NGramModel::score(const ScoreRequest& request) const {
    if (request.mode != ScoreMode::Causal) throw ScorerError("n-gram scorer supports causal mode only");
    if (request.target.empty()) throw ScorerError("empty target");
    ScoredSequence out;
    out.model_id = id();
    out.tokens = tokenize(request.target);
    std::vector<std::uint32_t> ids(static_cast<std::size_t>(order_ - 1), bos_);
    for (const auto& t : tokenize(request.context)) ids.push_back(id_of(t));
    const std::size_t first = ids.size();
    for (const auto& t : out.tokens) ids.push_back(id_of(t));
    for (std::size_t pos = first; pos < ids.size(); ++pos) {
        const double lp = std::log(prob_ids(ids, pos));
        out.token_log_probs.push_back(lp);
        out.log_prob += lp;
    }
    return out;
}

std::string NGramModel::id() const {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, alpha_);
    return "ngram(order=" + std::to_string(order_) + ",alpha=" + std::string(buf, end) +
           ",corpus=" + corpus_digest_.substr(0, 12) + ")";
}

}  // namespace priming
