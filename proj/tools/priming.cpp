#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "priming/corpus_io.hpp"
#include "priming/digest.hpp"
#include "priming/generator.hpp"
#include "priming/lexicon.hpp"
#include "priming/metrics.hpp"
#include "priming/pipeline.hpp"
#include "priming/remote_scorer.hpp"
#include "priming/run.hpp"
#include "priming/validator.hpp"

using namespace priming;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kScorer = 3 };

int fail(int code, const std::string& kind, const std::string& message, json extra = json::object()) {
    json rec{{"error", {{"exit_code", code}, {"kind", kind}, {"message", message}}}};
    for (auto& [k, v] : extra.items()) rec["error"][k] = v;
    std::cerr << rec.dump() << std::endl;
    return code;
}

std::map<Construction, double> parse_mix(const std::string& spec) {
    std::map<Construction, double> mix;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ',');) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw ConfigError("mix entry '" + part + "' is not STRUCTURE=WEIGHT");
        auto c = parse_construction(part.substr(0, eq));
        if (!c || *c == Construction::INTR_PAD) throw ConfigError("unknown structure in mix: " + part);
        mix[*c] = std::stod(part.substr(eq + 1));
    }
    if (mix.empty()) throw ConfigError("empty mix");
    return mix;
}

std::vector<Construction> parse_structures(const std::vector<std::string>& names) {
    std::vector<Construction> out;
    for (const auto& n : names) {
        if (n == "all") return {std::begin(kTargetStructures), std::end(kTargetStructures)};
        auto c = parse_construction(n);
        if (!c || *c == Construction::INTR_PAD) throw ConfigError("unknown structure '" + n + "'");
        out.push_back(*c);
    }
    return out;
}

struct GenerateFlags {
    std::string config;
    std::vector<std::string> conditions;
    std::vector<std::string> structures;
    std::optional<std::size_t> targets;
    std::optional<std::size_t> primes;
    std::optional<std::uint64_t> seed;
    std::string lexicon_dir;
    std::optional<std::size_t> cutoff;
    std::string out;
    unsigned threads = 0;
    bool force = false;
};

RunConfig config_from_flags(const GenerateFlags& f) {
    RunConfig c;
    if (!f.config.empty()) c = load_run_config(f.config);
    if (!f.lexicon_dir.empty()) c.lexicon_dir = f.lexicon_dir;
    if (c.lexicon_dir.empty()) throw ConfigError("--lexicon-dir is required");
    if (f.cutoff) c.frequency_cutoff = *f.cutoff;
    if (!f.structures.empty()) c.structures = parse_structures(f.structures);
    if (!f.conditions.empty()) {
        c.conditions.clear();
        for (const auto& tag : f.conditions) {
            if (tag == "all") {
                for (const auto& d : default_condition_matrix(0)) c.conditions.push_back(d);
            } else {
                c.conditions.push_back(parse_condition_tag(tag));
            }
        }
    }
    if (c.conditions.empty()) throw ConfigError("--condition is required");
    for (auto& cond : c.conditions) {
        if (f.seed) cond.seed = *f.seed;
        if (f.targets) cond.targets_per_structure = *f.targets;
        if (f.primes) cond.primes_per_target = *f.primes;
        cond.validate();
    }
    return c;
}

fs::path out_dir(const std::string& flag, const RunConfig& c) {
    if (!flag.empty()) return flag;
    if (c.output_dir) return *c.output_dir;
    throw ConfigError("--out is required");
}

RunOptions run_options(unsigned threads, bool force) {
    RunOptions o;
    o.threads = threads;
    o.overwrite = force;
    o.log = [](const std::string& m) { std::cerr << m << "\n"; };
    return o;
}

int cmd_generate(const GenerateFlags& f) {
    auto config = config_from_flags(f);
    const auto out = out_dir(f.out, config);
    config = generate_corpora(config, out, run_options(f.threads, f.force));
    std::cout << "wrote " << (out / "manifest.json").string() << "\n";
    return kOk;
}

struct ValidateFlags {
    std::vector<std::string> corpora;
    std::string lexicon_dir;
    std::string condition;
    std::string structure;
    std::size_t cutoff = kDefaultFrequencyCutoff;
    bool json_output = false;
};

int cmd_validate(const ValidateFlags& f) {
    const auto lex = load_lexicon(LexiconPaths::in_directory(f.lexicon_dir), f.cutoff);
    std::optional<Construction> structure;
    if (!f.structure.empty()) structure = parse_structures({f.structure}).front();
    std::size_t items = 0, violations = 0;
    for (const auto& path : f.corpora) {
        std::vector<PrimeTargetItem> corpus;
        try {
            corpus = read_corpus_file(path);
        } catch (const CorpusFormatError& e) {
            return fail(kValidation, "corpus_format", e.what());
        }
        if (corpus.empty()) return fail(kValidation, "validation", path + ": no items");
        for (const auto& item : corpus) {
            ++items;
            ConditionSpec cond = item.condition;
            if (!f.condition.empty() && parse_condition_tag(f.condition).tag() != cond.tag()) {
                ++violations;
                std::cout << path << ": " << item.id << ": condition: file has " << cond.tag() << ", expected "
                          << f.condition << "\n";
                continue;
            }
            for (const auto& v : validate_pair(item, cond, lex, structure)) {
                ++violations;
                if (f.json_output)
                    std::cout << json{{"file", path}, {"item", item.id}, {"constraint", v.constraint},
                                      {"words", v.words}, {"pair_index", v.pair_index}}
                                     .dump()
                              << "\n";
                else
                    std::cout << path << ": " << item.id << ": " << v.describe() << "\n";
            }
        }
    }
    std::cout << items << " items, " << violations << " violations\n";
    if (violations) return fail(kValidation, "validation", std::to_string(violations) + " violation(s)",
                                json{{"violations", violations}});
    return kOk;
}

struct ScoreFlags {
    std::string corpus;
    std::string out;
    std::string config;
    std::string scorer = "ngram";
    std::string lexicon_dir;
    int order = 3;
    double alpha = 0.1;
    std::string train_file;
    std::string train_mix = "ACT=1,PASS=1,DO=1,PO=1";
    std::size_t train_documents = 2000;
    std::size_t train_sentences = 8;
    std::optional<std::uint64_t> train_seed;
    std::size_t vocabulary_size = 50;
    std::string url;
    std::string mode = "causal";
    std::size_t max_in_flight = 4;
    std::size_t batch_size = 16;
    bool resume = false;
    bool force = false;
};

int cmd_score(const ScoreFlags& f) {
    ScorerConfig sc;
    std::optional<Lexicon> lex;
    if (!f.config.empty()) {
        const auto rc = load_run_config(f.config);
        sc = rc.scorer;
        lex = load_lexicon(LexiconPaths::in_directory(rc.lexicon_dir), rc.frequency_cutoff);
    } else {
        sc.kind = f.scorer;
        sc.order = f.order;
        sc.alpha = f.alpha;
        if (!f.train_file.empty()) sc.training_file = f.train_file;
        sc.training_mix = parse_mix(f.train_mix);
        sc.training_documents = f.train_documents;
        sc.sentences_per_document = f.train_sentences;
        sc.training_seed = f.train_seed;
        sc.vocabulary_size = f.vocabulary_size;
        sc.url = f.url;
        auto mode = parse_score_mode(f.mode);
        if (!mode) throw ConfigError("--mode must be causal or masked_pll");
        sc.mode = *mode;
        sc.max_in_flight = f.max_in_flight;
        sc.batch_size = f.batch_size;
    }
    const auto items = read_corpus_file(f.corpus);
    if (items.empty()) return fail(kValidation, "validation", f.corpus + ": no items");
    if (sc.kind == "ngram" && !sc.training_file && !lex) {
        if (f.lexicon_dir.empty()) throw ConfigError("--lexicon-dir or --train-file is needed for the n-gram scorer");
        lex = load_lexicon(LexiconPaths::in_directory(f.lexicon_dir));
    }
    const Lexicon empty;
    const auto scorer = make_scorer(sc, lex ? *lex : empty, items.front().condition.seed);
    ScoreOptions so;
    so.mode = sc.mode;
    so.max_in_flight = sc.max_in_flight;
    so.resume = f.resume;
    so.overwrite = f.force;
    const auto summary = score_corpus(items, sha256_file(f.corpus), *scorer, f.out, so);
    std::cout << "scored " << summary.targets << " targets (" << summary.rows << " new rows, resumed at "
              << summary.resumed_from << ") with " << scorer->id() << "\n";
    return kOk;
}

int cmd_report(const std::vector<std::string>& scores, const std::string& out, const std::string& ci) {
    auto method = parse_ci_method(ci);
    if (!method) throw ConfigError("--ci must be student_t or normal");
    std::vector<ScoreRow> rows;
    std::set<std::string> scorers;
    for (const auto& s : scores) {
        auto got = read_scores_file(s);
        for (const auto& r : got) scorers.insert(r.scorer);
        rows.insert(rows.end(), got.begin(), got.end());
    }
    if (rows.empty()) return fail(kValidation, "validation", "no score rows");
    std::string scorer;
    for (const auto& s : scorers) scorer += (scorer.empty() ? "" : ";") + s;
    const auto reports = build_reports(rows, *method);
    write_report(out, reports, *method, scorer);
    std::cout << report_csv(reports) << cochran_note_text() << "\n";
    return kOk;
}

int cmd_cochran(double z, double margin, double p) {
    std::cout << cochran_sample_size(z, margin, p) << "\n" << cochran_note_text({z, margin, p}) << "\n";
    return kOk;
}

int cmd_training_text(const std::string& lexicon_dir, const std::string& mix, std::size_t documents,
                      std::size_t sentences, std::uint64_t seed, const std::string& out) {
    const auto lex = load_lexicon(LexiconPaths::in_directory(lexicon_dir));
    const auto docs = make_training_text(lex, parse_mix(mix), documents, sentences, seed);
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + out);
    for (const auto& d : docs) f << d << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structural priming corpora: generate, validate, score, report"};
    app.require_subcommand(1);

    GenerateFlags gen;
    auto* g = app.add_subcommand("generate", "Build corpus files for conditions and structures");
    g->add_option("--config", gen.config, "JSON run config");
    g->add_option("--condition", gen.conditions, "Condition tag (repeatable; 'all' for the default matrix)");
    g->add_option("--structure", gen.structures, "ACT, PASS, DO, PO or all (repeatable)");
    g->add_option("--targets", gen.targets, "Targets per structure");
    g->add_option("--primes-per-target", gen.primes, "Prime pairs per target");
    g->add_option("--seed", gen.seed, "Random seed");
    g->add_option("--lexicon-dir", gen.lexicon_dir, "Lexicon directory");
    g->add_option("--frequency-cutoff", gen.cutoff, "Frequency rank cutoff");
    g->add_option("--out", gen.out, "Output directory");
    g->add_option("--threads", gen.threads, "Worker threads (0 = all cores)");
    g->add_flag("--force", gen.force, "Overwrite an existing run directory");

    ValidateFlags val;
    auto* v = app.add_subcommand("validate", "Check corpus files against their condition constraints");
    v->add_option("--corpus", val.corpora, "Corpus JSONL file (repeatable)")->required();
    v->add_option("--lexicon-dir", val.lexicon_dir, "Lexicon directory")->required();
    v->add_option("--condition", val.condition, "Expected condition tag");
    v->add_option("--structure", val.structure, "Expected target structure");
    v->add_option("--frequency-cutoff", val.cutoff, "Frequency rank cutoff");
    v->add_flag("--json", val.json_output, "One JSON object per violation");

    ScoreFlags sf;
    auto* s = app.add_subcommand("score", "Score every prime pair of a corpus file");
    s->add_option("--corpus", sf.corpus, "Corpus JSONL file")->required();
    s->add_option("--out", sf.out, "Scores JSONL file")->required();
    s->add_option("--config", sf.config, "Take the scorer section from a run config");
    s->add_option("--scorer", sf.scorer, "ngram, uniform or remote")
        ->check(CLI::IsMember({"ngram", "uniform", "remote"}));
    s->add_option("--lexicon-dir", sf.lexicon_dir, "Lexicon for synthetic n-gram training text");
    s->add_option("--order", sf.order, "n-gram order");
    s->add_option("--alpha", sf.alpha, "Additive smoothing constant");
    s->add_option("--train-file", sf.train_file, "n-gram training documents, one per line");
    s->add_option("--train-mix", sf.train_mix, "Synthetic training mix, e.g. DO=0.9,PO=0.1");
    s->add_option("--train-documents", sf.train_documents, "Synthetic training documents");
    s->add_option("--train-sentences", sf.train_sentences, "Sentences per synthetic document");
    s->add_option("--train-seed", sf.train_seed, "Seed for synthetic training text");
    s->add_option("--vocabulary-size", sf.vocabulary_size, "Uniform scorer vocabulary size");
    s->add_option("--scorer-url", sf.url, std::string("Scorer-service base URL (default $") + kScorerUrlEnv + ")");
    s->add_option("--mode", sf.mode, "causal or masked_pll");
    s->add_option("--max-in-flight", sf.max_in_flight, "Concurrent scoring requests");
    s->add_option("--batch-size", sf.batch_size, "Items per remote batch call");
    s->add_flag("--resume", sf.resume, "Continue from the checkpoint next to --out");
    s->add_flag("--force", sf.force, "Overwrite an existing scores file");

    std::vector<std::string> report_scores;
    std::string report_out, report_ci = "student_t";
    auto* r = app.add_subcommand("report", "Aggregate score files into CSV/JSON reports and plot data");
    r->add_option("--scores", report_scores, "Scores JSONL file (repeatable)")->required();
    r->add_option("--out", report_out, "Report directory")->required();
    r->add_option("--ci", report_ci, "student_t or normal");

    std::string run_config, run_manifest, run_out;
    unsigned run_threads = 0;
    bool run_force = false;
    auto* run = app.add_subcommand("run", "generate -> score -> report from a config or manifest");
    auto* rc = run->add_option("--config", run_config, "JSON run config");
    run->add_option("--manifest", run_manifest, "Re-run the config recorded in a manifest")->excludes(rc);
    run->add_option("--out", run_out, "Output directory");
    run->add_option("--threads", run_threads, "Worker threads (0 = all cores)");
    run->add_flag("--force", run_force, "Overwrite an existing run directory");

    double cz = 2.576, cm = 0.01, cp = 0.5;
    auto* c = app.add_subcommand("cochran", "Cochran sample size");
    c->add_option("--z", cz, "z score");
    c->add_option("--margin", cm, "Margin of error");
    c->add_option("--p", cp, "Estimated proportion");

    std::string tt_lex, tt_mix = "DO=0.9,PO=0.1", tt_out;
    std::size_t tt_docs = 2000, tt_sentences = 8;
    std::uint64_t tt_seed = 0;
    auto* tt = app.add_subcommand("make-training-text", "Synthetic running text with a construction mix");
    tt->add_option("--lexicon-dir", tt_lex, "Lexicon directory")->required();
    tt->add_option("--mix", tt_mix, "Construction weights, e.g. DO=0.9,PO=0.1");
    tt->add_option("--documents", tt_docs, "Number of documents");
    tt->add_option("--sentences", tt_sentences, "Sentences per document");
    tt->add_option("--seed", tt_seed, "Random seed");
    tt->add_option("--out", tt_out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fail(kUsage, "usage", e.what());
    }

    try {
        if (*g) return cmd_generate(gen);
        if (*v) return cmd_validate(val);
        if (*s) return cmd_score(sf);
        if (*r) return cmd_report(report_scores, report_out, report_ci);
        if (*run) {
            RunConfig config;
            if (!run_manifest.empty())
                config = config_from_manifest(run_manifest);
            else if (!run_config.empty())
                config = load_run_config(run_config);
            else
                throw ConfigError("run needs --config or --manifest");
            const auto out = out_dir(run_out, config);
            run_pipeline(config, out, run_options(run_threads, run_force));
            std::cout << "wrote " << (out / "manifest.json").string() << "\n";
            return kOk;
        }
        if (*c) return cmd_cochran(cz, cm, cp);
        if (*tt) return cmd_training_text(tt_lex, tt_mix, tt_docs, tt_sentences, tt_seed, tt_out);
    } catch (const GenerationError& e) {
        return fail(kValidation, "generation", e.what(), json{{"constraint", e.constraint()}});
    } catch (const CorpusFormatError& e) {
        return fail(kValidation, "corpus_format", e.what());
    } catch (const LexiconError& e) {
        return fail(kValidation, "lexicon", e.what());
    } catch (const MetricsError& e) {
        return fail(kValidation, "metrics", e.what());
    } catch (const ScorerError& e) {
        return fail(kScorer, "scorer", e.what());
    } catch (const ConfigError& e) {
        return fail(kUsage, "usage", e.what());
    } catch (const ConditionError& e) {
        return fail(kUsage, "usage", e.what());
    } catch (const LockedError& e) {
        return fail(kUsage, "locked", e.what());
    } catch (const std::exception& e) {
        return fail(kUsage, "error", e.what());
    }
    return kUsage;
}
