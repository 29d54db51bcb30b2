#include "priming/run.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>

#include "priming/corpus_io.hpp"
#include "priming/digest.hpp"
#include "priming/generator.hpp"
#include "priming/ngram.hpp"
#include "priming/pipeline.hpp"
#include "priming/remote_scorer.hpp"

namespace priming {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void allow_keys(const json& j, const std::string& section, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(section + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* allowed : keys) known = known || k == allowed;
        if (!known) throw ConfigError(section + ": unknown key '" + k + "'");
    }
}

Construction structure_from(const std::string& s) {
    auto c = parse_construction(s);
    if (!c || *c == Construction::INTR_PAD) throw ConfigError("unknown structure '" + s + "'");
    return *c;
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void say(const RunOptions& opts, const std::string& msg) {
    if (opts.log) opts.log(msg);
}

std::uint64_t base_seed(const RunConfig& c) { return c.conditions.empty() ? 0 : c.conditions.front().seed; }

Lexicon load(const RunConfig& c) {
    return load_lexicon(LexiconPaths::in_directory(c.lexicon_dir), c.frequency_cutoff);
}

void write_manifest(const fs::path& out, const std::string& command, const RunConfig& config,
                    const std::string& started, const std::optional<std::string>& scorer,
                    const std::vector<fs::path>& files) {
    json artifacts = json::array();
    for (const auto& f : files)
        artifacts.push_back(json{{"path", fs::relative(f, out).generic_string()}, {"sha256", sha256_file(f)}});
    json conditions = json::array();
    for (const auto& c : config.conditions) conditions.push_back(c.tag());
    json m{{"schema", kManifestSchema},
           {"command", command},
           {"config", run_config_to_json(config)},
           {"config_hash", config_hash(config)},
           {"seed", base_seed(config)},
           {"lexicon_fingerprint", lexicon_fingerprint(LexiconPaths::in_directory(config.lexicon_dir))},
           {"scorer", scorer ? json(*scorer) : json(nullptr)},
           {"conditions", conditions},
           {"started_at", started},
           {"finished_at", utc_now()},
           {"artifacts", artifacts}};
    std::ofstream(out / "manifest.json", std::ios::binary | std::ios::trunc) << m.dump(2) << "\n";
}

void check_fresh(const fs::path& out, const RunOptions& opts) {
    if (fs::exists(out / "manifest.json") && !opts.overwrite)
        throw std::runtime_error(out.string() + " already holds a run; refusing to overwrite (use --force)");
}

// Builds every corpus file; thresholds are written back into `config`.
std::vector<fs::path> generate_into(RunConfig& config, const Lexicon& lex, const fs::path& out,
                                    const RunOptions& opts) {
    fs::create_directories(out / "corpus");
    std::vector<fs::path> files;
    GenerateOptions gen{opts.threads};
    for (auto& cond : config.conditions) {
        cond = resolve_condition(cond, lex, gen);
        for (Construction s : config.structures) {
            const auto corpus = build_structure_corpus(cond, s, lex, gen);
            const auto path = out / "corpus" / corpus_file_name(cond, s);
            write_corpus_file(path, corpus.items);
            say(opts, "generated " + path.filename().string() + ": " + std::to_string(corpus.items.size()) +
                          " targets, " + std::to_string(corpus.pair_count()) + " pairs");
            files.push_back(path);
        }
    }
    return files;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    allow_keys(j, "config", {"lexicon", "conditions", "scorer", "output"});
    RunConfig c;
    try {
        const auto& lx = j.at("lexicon");
        allow_keys(lx, "lexicon", {"dir", "frequency_cutoff"});
        c.lexicon_dir = lx.at("dir").get<std::string>();
        c.frequency_cutoff = lx.value("frequency_cutoff", c.frequency_cutoff);

        const auto& cs = j.at("conditions");
        allow_keys(cs, "conditions", {"seed", "targets_per_structure", "primes_per_target", "structures", "list"});
        const std::uint64_t seed = cs.value("seed", std::uint64_t{0});
        const std::size_t targets = cs.value("targets_per_structure", std::size_t{1500});
        const std::size_t primes = cs.value("primes_per_target", std::size_t{10});
        if (cs.contains("structures")) {
            c.structures.clear();
            for (const auto& s : cs.at("structures")) c.structures.push_back(structure_from(s.get<std::string>()));
            if (c.structures.empty()) throw ConfigError("conditions.structures is empty");
        }
        const auto& list = cs.at("list");
        if (list.is_string() && list.get<std::string>() == "all") {
            c.conditions = default_condition_matrix(seed, targets, primes);
        } else if (list.is_array()) {
            for (const auto& e : list) {
                json obj = e.is_string() ? json{{"tag", e.get<std::string>()}} : e;
                if (!obj.is_object()) throw ConfigError("conditions.list entries must be tags or objects");
                if (!obj.contains("seed")) obj["seed"] = seed;
                if (!obj.contains("targets_per_structure")) obj["targets_per_structure"] = targets;
                if (!obj.contains("primes_per_target")) obj["primes_per_target"] = primes;
                c.conditions.push_back(obj.get<ConditionSpec>());
            }
        } else {
            throw ConfigError("conditions.list must be \"all\" or an array");
        }
        if (c.conditions.empty()) throw ConfigError("no conditions configured");

        if (j.contains("scorer")) {
            const auto& s = j.at("scorer");
            allow_keys(s, "scorer",
                       {"kind", "order", "alpha", "training", "vocabulary_size", "url", "mode", "batch_size",
                        "retries", "max_in_flight"});
            auto& sc = c.scorer;
            sc.kind = s.value("kind", sc.kind);
            if (sc.kind != "ngram" && sc.kind != "uniform" && sc.kind != "remote")
                throw ConfigError("scorer.kind must be ngram, uniform or remote");
            sc.order = s.value("order", sc.order);
            sc.alpha = s.value("alpha", sc.alpha);
            if (s.contains("training")) {
                const auto& t = s.at("training");
                allow_keys(t, "scorer.training", {"file", "mix", "documents", "sentences_per_document", "seed"});
                if (t.contains("file")) sc.training_file = t.at("file").get<std::string>();
                if (t.contains("mix")) {
                    sc.training_mix.clear();
                    for (const auto& [k, v] : t.at("mix").items()) sc.training_mix[structure_from(k)] = v.get<double>();
                }
                sc.training_documents = t.value("documents", sc.training_documents);
                sc.sentences_per_document = t.value("sentences_per_document", sc.sentences_per_document);
                if (t.contains("seed")) sc.training_seed = t.at("seed").get<std::uint64_t>();
            }
            sc.vocabulary_size = s.value("vocabulary_size", sc.vocabulary_size);
            sc.url = s.value("url", sc.url);
            if (s.contains("mode")) {
                const auto m = s.at("mode").get<std::string>();
                auto mode = parse_score_mode(m);
                if (!mode) throw ConfigError("scorer.mode must be causal or masked_pll");
                sc.mode = *mode;
            }
            sc.batch_size = s.value("batch_size", sc.batch_size);
            sc.retries = s.value("retries", sc.retries);
            sc.max_in_flight = s.value("max_in_flight", sc.max_in_flight);
            if (sc.max_in_flight == 0) throw ConfigError("scorer.max_in_flight must be positive");
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            allow_keys(o, "output", {"dir", "ci_method"});
            if (o.contains("dir")) c.output_dir = o.at("dir").get<std::string>();
            if (o.contains("ci_method")) {
                auto m = parse_ci_method(o.at("ci_method").get<std::string>());
                if (!m) throw ConfigError("output.ci_method must be student_t or normal");
                c.ci_method = *m;
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const ConditionError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    auto c = parse_run_config(j);
    const auto base = fs::absolute(path).parent_path();
    if (c.lexicon_dir.is_relative()) c.lexicon_dir = (base / c.lexicon_dir).lexically_normal();
    if (c.scorer.training_file && c.scorer.training_file->is_relative())
        c.scorer.training_file = (base / *c.scorer.training_file).lexically_normal();
    if (c.output_dir && c.output_dir->is_relative()) c.output_dir = (base / *c.output_dir).lexically_normal();
    return c;
}

json run_config_to_json(const RunConfig& c) {
    json structures = json::array();
    for (auto s : c.structures) structures.push_back(to_string(s));
    json conditions = json::array();
    for (const auto& cond : c.conditions) conditions.push_back(cond);
    const auto& sc = c.scorer;
    json mix = json::object();
    for (const auto& [k, v] : sc.training_mix) mix[std::string(to_string(k))] = v;
    json training{{"mix", mix}, {"documents", sc.training_documents}, {"sentences_per_document", sc.sentences_per_document}};
    if (sc.training_file) training["file"] = sc.training_file->string();
    if (sc.training_seed) training["seed"] = *sc.training_seed;
    json scorer{{"kind", sc.kind},
                {"order", sc.order},
                {"alpha", sc.alpha},
                {"training", training},
                {"vocabulary_size", sc.vocabulary_size},
                {"url", sc.url},
                {"mode", to_string(sc.mode)},
                {"batch_size", sc.batch_size},
                {"retries", sc.retries},
                {"max_in_flight", sc.max_in_flight}};
    json output{{"ci_method", to_string(c.ci_method)}};
    if (c.output_dir) output["dir"] = c.output_dir->string();
    return json{{"lexicon", {{"dir", c.lexicon_dir.string()}, {"frequency_cutoff", c.frequency_cutoff}}},
                {"conditions", {{"structures", structures}, {"list", conditions}}},
                {"scorer", scorer},
                {"output", output}};
}

std::string config_hash(const RunConfig& c) {
    auto j = run_config_to_json(c);
    j["output"].erase("dir");
    return sha256_hex(canonical_dump(j));
}

std::string corpus_file_name(const ConditionSpec& c, Construction structure) {
    return c.tag() + "_" + std::string(to_string(structure)) + ".jsonl";
}

RunConfig generate_corpora(RunConfig config, const fs::path& out, const RunOptions& opts) {
    DirectoryLock lock(out);
    check_fresh(out, opts);
    const auto started = utc_now();
    const auto lex = load(config);
    const auto files = generate_into(config, lex, out, opts);
    write_manifest(out, "generate", config, started, std::nullopt, files);
    return config;
}

std::unique_ptr<Scorer> make_scorer(const ScorerConfig& sc, const Lexicon& lex, std::uint64_t seed,
                                    std::vector<std::string>* training_text) {
    if (sc.kind == "uniform") return std::make_unique<UniformScorer>(sc.vocabulary_size);
    if (sc.kind == "remote") {
        RemoteScorerOptions o;
        o.base_url = sc.url;
        if (o.base_url.empty())
            if (const char* env = std::getenv(kScorerUrlEnv)) o.base_url = env;
        o.mode = sc.mode;
        o.batch_size = sc.batch_size;
        o.retries = sc.retries;
        auto r = std::make_unique<RemoteScorer>(o);
        r->connect();
        return r;
    }
    if (sc.kind != "ngram") throw ConfigError("unknown scorer kind '" + sc.kind + "'");
    if (sc.mode != ScoreMode::Causal) throw ConfigError("the n-gram scorer is causal only");
    std::vector<std::string> docs;
    if (sc.training_file) {
        std::ifstream in(*sc.training_file);
        if (!in) throw ConfigError("cannot open training file " + sc.training_file->string());
        for (std::string line; std::getline(in, line);)
            if (!line.empty()) docs.push_back(line);
    } else {
        docs = make_training_text(lex, sc.training_mix, sc.training_documents, sc.sentences_per_document,
                                  sc.training_seed.value_or(seed));
    }
    auto model = std::make_unique<NGramModel>(NGramModel::train(docs, sc.order, sc.alpha));
    if (training_text) *training_text = std::move(docs);
    return model;
}

RunConfig run_pipeline(RunConfig config, const fs::path& out, const RunOptions& opts) {
    DirectoryLock lock(out);
    check_fresh(out, opts);
    const auto started = utc_now();
    const auto lex = load(config);
    auto files = generate_into(config, lex, out, opts);

    std::vector<std::string> training;
    const auto scorer = make_scorer(config.scorer, lex, base_seed(config), &training);
    if (config.scorer.kind == "ngram" && !config.scorer.training_file) {
        const auto path = out / "training.txt";
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        for (const auto& d : training) f << d << '\n';
        files.push_back(path);
    }
    say(opts, "scorer: " + scorer->id());

    fs::create_directories(out / "scores");
    std::vector<ScoreRow> rows;
    const auto corpora = files;
    for (const auto& corpus : corpora) {
        if (corpus.parent_path().filename() != "corpus") continue;
        const auto items = read_corpus_file(corpus);
        auto scores = out / "scores" / corpus.filename();
        scores.replace_extension(".scores.jsonl");
        ScoreOptions so;
        so.mode = config.scorer.mode;
        so.max_in_flight = config.scorer.max_in_flight;
        so.resume = true;
        so.overwrite = opts.overwrite;
        const auto summary = score_corpus(items, sha256_file(corpus), *scorer, scores, so);
        say(opts, "scored " + scores.filename().string() + ": " + std::to_string(summary.rows) + " rows");
        files.push_back(scores);
        auto got = read_scores_file(scores);
        rows.insert(rows.end(), got.begin(), got.end());
    }

    const auto reports = build_reports(rows, config.ci_method);
    for (const auto& f : write_report(out / "report", reports, config.ci_method, scorer->id())) files.push_back(f);
    say(opts, cochran_note_text());
    write_manifest(out, "run", config, started, scorer->id(), files);
    return config;
}

RunConfig config_from_manifest(const fs::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw ConfigError("cannot open manifest " + manifest.string());
    try {
        const auto j = json::parse(in);
        if (j.value("schema", std::string()) != kManifestSchema) throw ConfigError("not a run manifest");
        return parse_run_config(j.at("config"));
    } catch (const json::exception& e) {
        throw ConfigError(manifest.string() + ": " + e.what());
    }
}

}  // namespace priming
