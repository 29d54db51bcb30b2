#include "priming/pipeline.hpp"

#include <charconv>
#include <fcntl.h>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

#include "priming/condition.hpp"

namespace priming {

using nlohmann::json;

namespace {

std::string num(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// Position of a tag in the default matrix, so reports follow one fixed order.
std::size_t condition_rank(const std::string& tag) {
    static const std::vector<std::string> order = [] {
        std::vector<std::string> out;
        for (const auto& c : default_condition_matrix(0, 1, 1)) out.push_back(c.tag());
        return out;
    }();
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i] == tag) return i;
    return order.size();
}

std::pair<std::string, std::string> plot_group(const std::string& tag) {
    auto suffix = [&](std::string_view prefix) { return tag.substr(prefix.size()); };
    if (tag == "core") return {"core", ""};
    if (tag.starts_with("sem_sim_")) return {"semantic_similarity", suffix("sem_sim_")};
    if (tag.starts_with("overlap_")) return {"lexical_overlap", suffix("overlap_")};
    if (tag == "identical") return {"lexical_overlap", "identical"};
    if (tag == "implausible_prime") return {"implausibility", "implausible_prime"};
    if (tag.starts_with("recency_")) return {"recency", suffix("recency_")};
    if (tag.starts_with("cumulative_")) return {"cumulativity", suffix("cumulative_")};
    if (tag.starts_with("complexity_")) return {"complexity", suffix("complexity_")};
    return {"other", tag};
}

json summary_json(const Summary& s) {
    return json{{"mean_pe", s.mean_pe},
                {"sd", s.sd},
                {"ci99", {s.ci99.lo, s.ci99.hi}},
                {"preference_rate", s.preference_rate},
                {"n_targets", s.n_targets},
                {"n_pairs", s.n_pairs},
                {"preference_count", s.preference_count}};
}

}  // namespace

std::pair<ScoreRequest, ScoreRequest> pair_requests(const PrimeTargetItem& item, const PrimePair& pair,
                                                    ScoreMode mode) {
    const auto target = format_target(item.target);
    return {ScoreRequest{format_context(pair.congruent), target, mode},
            ScoreRequest{format_context(pair.incongruent), target, mode}};
}

json score_row_to_json(const ScoreRow& r) {
    return json{{"schema", kScoresSchema},
                {"condition", r.condition},
                {"structure", to_string(r.structure)},
                {"target_id", r.score.target_id},
                {"pair", r.score.prime_pair_index},
                {"lp_congruent", r.score.lp_congruent},
                {"lp_incongruent", r.score.lp_incongruent},
                {"scorer", r.scorer}};
}

ScoreRow score_row_from_json(const json& j) {
    if (j.value("schema", std::string()) != kScoresSchema) throw MetricsError("not a scores row");
    ScoreRow r;
    r.condition = j.at("condition").get<std::string>();
    const auto s = j.at("structure").get<std::string>();
    auto c = parse_construction(s);
    if (!c || *c == Construction::INTR_PAD) throw MetricsError("bad structure '" + s + "'");
    r.structure = *c;
    r.score.target_id = j.at("target_id").get<std::string>();
    r.score.prime_pair_index = j.at("pair").get<std::size_t>();
    r.score.lp_congruent = j.at("lp_congruent").get<double>();
    r.score.lp_incongruent = j.at("lp_incongruent").get<double>();
    r.scorer = j.at("scorer").get<std::string>();
    return r;
}

std::vector<ScoreRow> read_scores_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MetricsError("cannot open " + path.string());
    std::vector<ScoreRow> rows;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.empty()) continue;
        try {
            rows.push_back(score_row_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw MetricsError(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return rows;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& scores) {
    auto p = scores;
    p += ".checkpoint";
    return p;
}

ScoreSummary score_corpus(const std::vector<PrimeTargetItem>& items, const std::string& corpus_digest,
                          const Scorer& scorer, const std::filesystem::path& out, const ScoreOptions& opts) {
    const auto ckpt = checkpoint_path(out);
    const std::string scorer_id = scorer.id();
    ScoreSummary summary;
    summary.targets = items.size();

    bool resumed = false;
    if (opts.resume && std::filesystem::exists(ckpt) && std::filesystem::exists(out)) {
        std::ifstream in(ckpt);
        const auto j = json::parse(in);
        std::string problem;
        if (j.at("corpus").get<std::string>() != corpus_digest)
            problem = "checkpoint belongs to a different corpus";
        else if (j.at("scorer").get<std::string>() != scorer_id)
            problem = "checkpoint was written by scorer " + j.at("scorer").get<std::string>();
        else if (j.at("targets_done").get<std::size_t>() > items.size())
            problem = "checkpoint past the end";
        if (!problem.empty() && !opts.overwrite) throw std::runtime_error(ckpt.string() + ": " + problem);
        if (problem.empty()) {
            summary.resumed_from = j.at("targets_done").get<std::size_t>();
            // Drop anything written after the last checkpoint.
            std::filesystem::resize_file(out, j.at("bytes").get<std::uintmax_t>());
            resumed = true;
        }
    } else if (std::filesystem::exists(out) && !opts.overwrite && !opts.resume) {
        throw std::runtime_error(out.string() + " exists (use --resume or --force)");
    }
    if (!resumed) std::ofstream(out, std::ios::binary | std::ios::trunc);

    std::ofstream file(out, std::ios::binary | std::ios::app);
    if (!file) throw std::runtime_error("cannot write " + out.string());
    const std::size_t every = std::max<std::size_t>(1, opts.checkpoint_every);
    for (std::size_t start = summary.resumed_from; start < items.size(); start += every) {
        const std::size_t end = std::min(items.size(), start + every);
        std::vector<ScoreRequest> requests;
        for (std::size_t t = start; t < end; ++t) {
            for (const auto& pair : items[t].pairs) {
                auto [c, i] = pair_requests(items[t], pair, opts.mode);
                requests.push_back(std::move(c));
                requests.push_back(std::move(i));
            }
        }
        const auto scored = batch_score(requests, scorer, opts.max_in_flight);
        std::size_t k = 0;
        for (std::size_t t = start; t < end; ++t) {
            const auto& item = items[t];
            for (std::size_t p = 0; p < item.pairs.size(); ++p, k += 2) {
                ScoreRow row;
                row.condition = item.condition.tag();
                row.structure = item.structure();
                row.score = PairedScore{item.id, p, scored[k].log_prob, scored[k + 1].log_prob};
                row.scorer = scorer_id;
                file << score_row_to_json(row).dump() << '\n';
                ++summary.rows;
            }
        }
        file.flush();
        if (!file) throw std::runtime_error("write failed: " + out.string());
        const auto bytes = static_cast<std::uintmax_t>(file.tellp());
        write_atomically(ckpt, json{{"corpus", corpus_digest},
                                    {"scorer", scorer_id},
                                    {"targets_done", end},
                                    {"bytes", bytes}}
                                   .dump() +
                                   "\n");
        if (opts.progress) opts.progress(end, items.size());
    }
    return summary;
}

std::vector<ConditionReport> build_reports(const std::vector<ScoreRow>& rows, CiMethod method) {
    using Key = std::pair<std::string, Construction>;
    std::map<Key, std::map<std::string, std::vector<PairedScore>>> grouped;
    std::map<std::string, std::string> scorer_of;
    std::map<std::pair<std::string, std::string>, Construction> structure_of;
    std::set<std::tuple<std::string, std::string, std::size_t>> seen;

    for (const auto& r : rows) {
        auto [it, fresh] = scorer_of.emplace(r.condition, r.scorer);
        if (!fresh && it->second != r.scorer)
            throw MetricsError("condition " + r.condition + " was scored by both '" + it->second + "' and '" +
                               r.scorer + "'");
        auto [st, fresh_t] = structure_of.emplace(std::make_pair(r.condition, r.score.target_id), r.structure);
        if (!fresh_t && st->second != r.structure)
            throw MetricsError("target " + r.score.target_id + " appears with two structures");
        if (!seen.emplace(r.condition, r.score.target_id, r.score.prime_pair_index).second)
            throw MetricsError("duplicate score for " + r.condition + " " + r.score.target_id + " pair " +
                               std::to_string(r.score.prime_pair_index));
        grouped[{r.condition, r.structure}][r.score.target_id].push_back(r.score);
    }

    std::map<Key, std::vector<TargetPE>> pes;
    for (auto& [key, targets] : grouped)
        for (auto& [id, scores] : targets) pes[key].push_back(priming_effect(scores));

    std::vector<ConditionReport> out;
    for (auto& [key, targets] : pes) {
        const auto other_key = Key{key.first, counterpart(key.second)};
        const auto it = pes.find(other_key);
        std::span<const TargetPE> other;
        if (it != pes.end()) other = it->second;
        out.push_back(aggregate(key.first, key.second, targets, other, method));
    }
    std::stable_sort(out.begin(), out.end(), [](const ConditionReport& a, const ConditionReport& b) {
        const auto ra = condition_rank(a.condition), rb = condition_rank(b.condition);
        if (ra != rb) return ra < rb;
        if (a.condition != b.condition) return a.condition < b.condition;
        return a.structure < b.structure;
    });
    return out;
}

std::string cochran_note_text(const CochranNote& c) {
    const auto n = cochran_sample_size(c.z, c.margin, c.p);
    const auto gap = n - kReferenceCorpusSize;
    return "Cochran sample size (z=" + num(c.z) + ", margin=" + num(c.margin) + ", p=" + num(c.p) + ") = " +
           std::to_string(n) + "; reference corpus size per structure = " + std::to_string(kReferenceCorpusSize) +
           "; discrepancy: the reference size is " + std::to_string(gap < 0 ? -gap : gap) +
           (gap > 0 ? " below" : " above") + " the formula's value";
}

std::string report_csv(const std::vector<ConditionReport>& reports) {
    std::ostringstream out;
    out << "condition,structure,n_targets,n_pairs,mean_pe,sd,ci99_lo,ci99_hi,preference_rate,other_structure,"
           "behavior\n";
    for (const auto& r : reports) {
        const auto& s = r.summary;
        out << r.condition << ',' << to_string(r.structure) << ',' << s.n_targets << ',' << s.n_pairs << ','
            << num(s.mean_pe) << ',' << num(s.sd) << ',' << num(s.ci99.lo) << ',' << num(s.ci99.hi) << ','
            << num(s.preference_rate) << ',' << (r.other ? std::string(to_string(r.other_structure)) : "") << ','
            << to_string(r.behavior) << '\n';
    }
    return out.str();
}

json report_json(const std::vector<ConditionReport>& reports, CiMethod method, const std::string& scorer,
                 const CochranNote& cochran) {
    json rs = json::array();
    for (const auto& r : reports) {
        json targets = json::array();
        for (const auto& t : r.targets)
            targets.push_back(json{{"target_id", t.target_id},
                                   {"pe", t.pe},
                                   {"n_pairs", t.n_pairs},
                                   {"preference_count", t.preference_count}});
        json j{{"condition", r.condition},
               {"structure", to_string(r.structure)},
               {"summary", summary_json(r.summary)},
               {"behavior", to_string(r.behavior)},
               {"targets", targets}};
        if (r.other)
            j["behavior_inputs"] = json{{"structure", to_string(r.other_structure)}, {"summary", summary_json(*r.other)}};
        rs.push_back(j);
    }
    return json{{"schema", kReportSchema},
                {"ci_method", to_string(method)},
                {"scorer", scorer},
                {"cochran",
                 {{"z", cochran.z},
                  {"margin", cochran.margin},
                  {"p", cochran.p},
                  {"sample_size", cochran_sample_size(cochran.z, cochran.margin, cochran.p)},
                  {"reference_corpus_size", kReferenceCorpusSize},
                  {"note", cochran_note_text(cochran)}}},
                {"reports", rs}};
}

std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir,
                                                const std::vector<ConditionReport>& reports, CiMethod method,
                                                const std::string& scorer) {
    std::filesystem::create_directories(dir / "plots");
    std::vector<std::filesystem::path> written;
    write_atomically(dir / "report.csv", report_csv(reports));
    written.push_back(dir / "report.csv");
    write_atomically(dir / "report.json", report_json(reports, method, scorer).dump(2) + "\n");
    written.push_back(dir / "report.json");

    std::map<std::string, std::ostringstream> plots;
    for (const auto& r : reports) {
        const auto [group, x] = plot_group(r.condition);
        auto& out = plots[group];
        if (out.tellp() == 0) out << "condition,x,structure,mean_pe,ci99_lo,ci99_hi,preference_rate,n_targets,scorer\n";
        out << r.condition << ',' << x << ',' << to_string(r.structure) << ',' << num(r.summary.mean_pe) << ','
            << num(r.summary.ci99.lo) << ',' << num(r.summary.ci99.hi) << ',' << num(r.summary.preference_rate)
            << ',' << r.summary.n_targets << ",\"" << scorer << "\"\n";
    }
    for (const auto& [group, out] : plots) {
        const auto path = dir / "plots" / (group + ".csv");
        write_atomically(path, out.str());
        written.push_back(path);
    }
    return written;
}

DirectoryLock::DirectoryLock(const std::filesystem::path& dir) : path_(dir / ".priming.lock") {
    std::filesystem::create_directories(dir);
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) throw LockedError(dir.string() + " is locked by another run (" + path_.string() + ")");
    const auto pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

DirectoryLock::~DirectoryLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
}

std::string canonical_dump(const json& j) {
    // nlohmann::json objects are key-sorted, so dump() is already canonical.
    return j.dump();
}

}  // namespace priming
