// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "priming/corpus_io.hpp"
#include "priming/generator.hpp"
#include "priming/metrics.hpp"
#include "priming/ngram.hpp"
#include "priming/pipeline.hpp"
#include "priming/run.hpp"
#include "priming/validator.hpp"
#include "test_support.hpp"

using namespace priming;
using namespace priming::testing;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double x, int digits = 6) {
    std::ostringstream s;
    s << std::setprecision(digits) << x;
    return s.str();
}

// Per-target PEs for one corpus under a scorer.
std::vector<TargetPE> target_pes(const std::vector<PrimeTargetItem>& items, const Scorer& scorer,
                                 std::vector<std::vector<PairedScore>>* raw = nullptr) {
    std::vector<ScoreRequest> reqs;
    for (const auto& item : items)
        for (const auto& p : item.pairs) {
            auto [c, i] = pair_requests(item, p);
            reqs.push_back(c);
            reqs.push_back(i);
        }
    const auto scored = batch_score(reqs, scorer, 4);
    std::vector<TargetPE> out;
    std::size_t k = 0;
    for (const auto& item : items) {
        std::vector<PairedScore> s;
        for (std::size_t p = 0; p < item.pairs.size(); ++p, k += 2)
            s.push_back({item.id, p, scored[k].log_prob, scored[k + 1].log_prob});
        out.push_back(priming_effect(s));
        if (raw) raw->push_back(std::move(s));
    }
    return out;
}

void metric_identities() {
    const auto start = Clock::now();
    const auto& lex = full_lexicon();
    auto cond = parse_condition_tag("core");
    cond.targets_per_structure = 100;
    cond.seed = 1;
    UniformScorer uniform(50);
    double worst = 0.0;
    std::size_t pairs = 0;
    std::vector<std::vector<PairedScore>> raw;
    for (const auto& corpus : build_corpus(cond, lex)) {
        auto pes = target_pes(corpus.items, uniform);
        worst = std::max(worst, std::abs(summarize(pes).mean_pe));
        pairs += corpus.pair_count();
    }
    const double elapsed = seconds_since(start);

    // Antisymmetry and shift invariance on real n-gram scores of a DO corpus.
    const auto& fx = fixture_lexicon();
    auto model = NGramModel::train(make_training_text(fx, {{Construction::DO, 1}, {Construction::PO, 1}}, 200, 6, 5), 3, 0.1);
    auto dcond = parse_condition_tag("core");
    dcond.targets_per_structure = 100;
    dcond.seed = 2;
    const auto items = build_structure_corpus(dcond, Construction::DO, fx).items;
    target_pes(items, model, &raw);
    double anti = 0.0, shift = 0.0;
    Rng rng(9);
    for (const auto& s : raw) {
        const double pe = priming_effect(s).pe;
        auto swapped = s, moved = s;
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::swap(swapped[i].lp_congruent, swapped[i].lp_incongruent);
            const double k = static_cast<double>(rng.below(4001)) / 100.0 - 20.0;
            moved[i].lp_congruent += k;
            moved[i].lp_incongruent += k;
        }
        const double scale = std::max(1.0, std::abs(pe));
        anti = std::max(anti, std::abs(priming_effect(swapped).pe + pe) / scale);
        shift = std::max(shift, std::abs(priming_effect(moved).pe - pe) / scale);
    }
    const bool ok = worst <= 1e-12 && elapsed < 10.0 && anti <= 1e-12 && shift <= 1e-12;
    verdict("metric_identities", ok,
            "uniform |mean PE| max " + fmt(worst) + " over " + std::to_string(pairs) + " pairs in " + fmt(elapsed, 3) +
                " s; antisymmetry err " + fmt(anti) + "; shift err " + fmt(shift));
}

void corpus_constraints() {
    const auto& lex = full_lexicon();
    const auto start = Clock::now();
    auto core = default_condition_matrix(0).front();
    std::size_t pairs = 0, violations = 0;
    std::string first;
    for (const auto& corpus : build_corpus(core, lex)) {
        pairs += corpus.pair_count();
        for (const auto& item : corpus.items)
            for (const auto& v : validate_pair(item, core, lex, corpus.structure)) {
                if (!violations) first = item.id + ": " + v.describe();
                ++violations;
            }
    }
    const double elapsed = seconds_since(start);

    // Every condition at 50 pairs per structure, plus context-shape checks.
    std::size_t cond_violations = 0, conditions = 0;
    std::string cond_detail;
    for (auto cond : default_condition_matrix(3)) {
        cond.primes_per_target = 10;
        cond.targets_per_structure = 50 / cond.pairs_per_target();
        cond = resolve_condition(cond, lex);
        ++conditions;
        for (auto s : kTargetStructures) {
            Corpus corpus;
            try {
                corpus = build_structure_corpus(cond, s, lex);
            } catch (const std::exception& e) {
                ++cond_violations;
                cond_detail += " " + cond.tag() + "/" + std::string(to_string(s)) + " failed: " + e.what();
                continue;
            }
            const bool capped = cond.kind == ConditionKind::SemSimAll;
            if (capped ? corpus.pair_count() == 0 : corpus.pair_count() != 50) {
                ++cond_violations;
                cond_detail += " " + cond.tag() + " has " + std::to_string(corpus.pair_count()) + " pairs";
            }
            for (const auto& item : corpus.items) {
                for (const auto& v : validate_pair(item, cond, lex, s)) {
                    ++cond_violations;
                    if (cond_detail.size() < 400) cond_detail += " " + cond.tag() + ": " + v.describe();
                }
                for (const auto& p : item.pairs) {
                    std::size_t want = 1;
                    if (cond.kind == ConditionKind::Recency) want = 4;
                    if (cond.kind == ConditionKind::Cumulative) want = static_cast<std::size_t>(cond.k);
                    if (p.congruent.size() != want || p.incongruent.size() != 1) {
                        ++cond_violations;
                        cond_detail += " " + cond.tag() + ": context length " + std::to_string(p.congruent.size());
                    }
                }
            }
        }
    }
    const bool ok = violations == 0 && pairs == 60000 && elapsed < 300.0 && cond_violations == 0;
    verdict("corpus_constraints", ok,
            std::to_string(pairs) + " core pairs, " + std::to_string(violations) + " violations, " + fmt(elapsed, 3) +
                " s" + (first.empty() ? "" : " (first: " + first + ")") + "; " + std::to_string(conditions) +
                " conditions at 50 pairs per structure, " + std::to_string(cond_violations) + " violations" +
                cond_detail);
}

// Independent tables for the oracle: with a trigram model and contexts that end
// in "... noun </s>", only the first target token sees the context, so a pair's
// PE is ln q(w1 | c_last) - ln q(w1 | i_last) with
// q(w | a) = (c(a </s> w) + alpha) / (c(a </s> *) + alpha V).
struct BoundaryTables {
    std::map<std::string, std::map<std::string, double>> next;
    std::map<std::string, double> total;
    double v = 0.0;
};

std::vector<std::string> oracle_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string w; in >> w;) {
        for (auto& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        const bool end = w.back() == '.';
        if (end) w.pop_back();
        if (!w.empty()) out.push_back(w);
        if (end) out.push_back("</s>");
    }
    if (!out.empty() && out.back() != "</s>") out.push_back("</s>");
    return out;
}

BoundaryTables boundary_tables(const std::vector<std::string>& docs) {
    BoundaryTables t;
    std::set<std::string> types{"</s>", "<unk>"};
    for (const auto& d : docs) {
        const auto toks = oracle_tokens(d);
        types.insert(toks.begin(), toks.end());
        for (std::size_t i = 2; i < toks.size(); ++i) {
            if (toks[i - 1] != "</s>") continue;
            t.next[toks[i - 2]][toks[i]] += 1;
            t.total[toks[i - 2]] += 1;
        }
    }
    t.v = static_cast<double>(types.size());
    return t;
}

double oracle_pair_pe(const BoundaryTables& t, double alpha, const std::string& ctx_c, const std::string& ctx_i,
                      const std::string& target) {
    const auto c = oracle_tokens(ctx_c), i = oracle_tokens(ctx_i);
    const auto w = oracle_tokens(target).front();
    auto q = [&](const std::string& a) {
        double n = 0.0, tot = 0.0;
        if (auto it = t.next.find(a); it != t.next.end()) {
            tot = t.total.at(a);
            if (auto jt = it->second.find(w); jt != it->second.end()) n = jt->second;
        }
        return (n + alpha) / (tot + alpha * t.v);
    };
    return std::log(q(c[c.size() - 2])) - std::log(q(i[i.size() - 2]));
}

void ngram_oracle() {
    const auto& lex = fixture_lexicon();
    const double alpha = 0.1;
    const auto docs = make_training_text(lex, {{Construction::DO, 0.9}, {Construction::PO, 0.1}}, 2000, 8, 17);
    const auto tables = boundary_tables(docs);
    const auto model = NGramModel::train(docs, 3, alpha);

    auto cond = parse_condition_tag("core");
    cond.targets_per_structure = 200;
    cond.seed = 23;
    std::map<Construction, std::vector<TargetPE>> pes;
    std::map<Construction, double> expected;
    for (auto s : {Construction::DO, Construction::PO}) {
        const auto items = build_structure_corpus(cond, s, lex).items;
        pes[s] = target_pes(items, model);
        double sum = 0.0;
        for (const auto& item : items) {
            double t = 0.0;
            for (const auto& p : item.pairs) {
                const auto [c, i] = pair_requests(item, p);
                t += oracle_pair_pe(tables, alpha, c.context, i.context, c.target);
            }
            sum += t / static_cast<double>(item.pairs.size());
        }
        expected[s] = sum / static_cast<double>(items.size());
    }
    // Expected signs come from the count tables alone.
    const bool tables_say_biased = expected[Construction::DO] > 0 && expected[Construction::PO] < 0;
    auto report = aggregate("core", Construction::DO, pes[Construction::DO], pes[Construction::PO]);
    const double got_do = report.summary.mean_pe, got_po = report.other->mean_pe;
    const bool agree = std::abs(got_do - expected[Construction::DO]) < 1e-9 &&
                       std::abs(got_po - expected[Construction::PO]) < 1e-9;
    const bool ok = tables_say_biased && agree && got_do > 0 && got_po < 0 && report.behavior == Behavior::Biased;
    verdict("ngram_oracle", ok,
            "count tables predict DO " + fmt(expected[Construction::DO]) + ", PO " +
                fmt(expected[Construction::PO]) + "; scorer gives DO " + fmt(got_do) + " CI99 [" +
                fmt(report.summary.ci99.lo) + ", " + fmt(report.summary.ci99.hi) + "], PO " + fmt(got_po) +
                " CI99 [" + fmt(report.other->ci99.lo) + ", " + fmt(report.other->ci99.hi) + "]; behavior " +
                std::string(to_string(report.behavior)));
}

void additivity() {
    const auto& lex = full_lexicon();
    const auto docs = make_training_text(lex, {{Construction::ACT, 1}, {Construction::PASS, 1}, {Construction::DO, 1},
                                               {Construction::PO, 1}},
                                         500, 8, 31);
    const auto model = NGramModel::train(docs, 3, 0.1);
    auto cond = parse_condition_tag("cumulative_3");
    cond.targets_per_structure = 60;
    cond.primes_per_target = 5;
    cond.seed = 4;
    std::vector<ScoreRequest> pool;
    for (const auto& corpus : build_corpus(cond, lex))
        for (const auto& item : corpus.items)
            for (const auto& p : item.pairs) {
                auto [c, i] = pair_requests(item, p);
                pool.push_back(c);
                pool.push_back(i);
            }
    Rng rng(77);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        auto r = pool[rng.below(pool.size())];
        // Mix contexts and targets from different items too.
        if (rng.coin()) r.target = pool[rng.below(pool.size())].target;
        const double split = model.score(r).log_prob;
        const double whole = model.score({"", concatenate(r.context, r.target)}).log_prob;
        const double ctx = r.context.empty() ? 0.0 : model.score({"", r.context}).log_prob;
        worst = std::max(worst, std::abs(split - (whole - ctx)));
    }
    verdict("additivity", worst <= 1e-9, "1000 pairs, max |score - (whole - context)| = " + fmt(worst));
}

void cochran() {
    const auto n = cochran_sample_size(2.576, 0.01, 0.5);
    // 2.576^2 * 0.25 / 0.01^2 = 16589.44; the ceiling is 16590.
    verdict("cochran", n == 16589,
            "cochran_sample_size(2.576, 0.01, 0.5) = " + std::to_string(n) + " (expected 16589); " +
                cochran_note_text());
}

void determinism() {
    TempDir dir;
    nlohmann::json cfg{
        {"lexicon", {{"dir", kDataDir.string()}}},
        {"conditions", {{"seed", 2024}, {"targets_per_structure", 20}, {"primes_per_target", 5}, {"list", "all"}}},
        {"scorer", {{"kind", "ngram"}, {"order", 3}, {"alpha", 0.1}, {"training", {{"documents", 300}}}}}};
    const auto start = Clock::now();
    run_pipeline(parse_run_config(cfg), dir / "seed");
    const auto manifest = dir / "seed" / "manifest.json";
    run_pipeline(config_from_manifest(manifest), dir / "a");
    run_pipeline(config_from_manifest(manifest), dir / "b");
    std::size_t files = 0, differing = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir / "a" / "report")) {
        if (!e.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(e.path(), dir / "a");
        ++files;
        if (read_file(e.path()) != read_file(dir / "b" / rel) || read_file(e.path()) != read_file(dir / "seed" / rel))
            ++differing;
    }
    verdict("determinism", files > 0 && differing == 0,
            std::to_string(files) + " report files compared across 3 runs, " + std::to_string(differing) +
                " differ; " + fmt(seconds_since(start), 3) + " s");
}

}  // namespace

int main() {
    const std::pair<const char*, void (*)()> checks[] = {
        {"metric_identities", metric_identities}, {"corpus_constraints", corpus_constraints},
        {"ngram_oracle", ngram_oracle},           {"additivity", additivity},
        {"cochran", cochran},                     {"determinism", determinism},
    };
    for (const auto& [name, fn] : checks) {
        try {
            fn();
        } catch (const std::exception& e) {
            verdict(name, false, std::string("threw: ") + e.what());
        }
    }
    return failures ? 1 : 0;
}
