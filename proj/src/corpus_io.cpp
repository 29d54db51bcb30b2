#include "priming/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace priming {

using nlohmann::json;

namespace {

template <typename T>
T parse_or_throw(std::optional<T> v, const std::string& what, const std::string& raw) {
    if (!v) throw CorpusFormatError("unknown " + what + " '" + raw + "'");
    return *v;
}

json np_to_json(const NounPhraseSpec& np) {
    json j{{"noun", np.noun}, {"determiner", to_string(np.determiner)}};
    if (np.adjective) j["adjective"] = *np.adjective;
    if (np.pp) {
        json pp{{"kind", np.pp->kind == PrepPhrase::Kind::With ? "with" : "from"}, {"noun", np.pp->noun}};
        if (np.pp->kind == PrepPhrase::Kind::With) pp["determiner"] = to_string(np.pp->determiner);
        if (np.pp->adjective) pp["adjective"] = *np.pp->adjective;
        j["pp"] = pp;
    }
    return j;
}

NounPhraseSpec np_from_json(const json& j) {
    NounPhraseSpec np;
    np.noun = j.at("noun").get<std::string>();
    const auto det = j.at("determiner").get<std::string>();
    np.determiner = parse_or_throw(parse_determiner(det), "determiner", det);
    if (j.contains("adjective")) np.adjective = j.at("adjective").get<std::string>();
    if (j.contains("pp")) {
        const auto& p = j.at("pp");
        PrepPhrase pp;
        const auto kind = p.at("kind").get<std::string>();
        if (kind == "with")
            pp.kind = PrepPhrase::Kind::With;
        else if (kind == "from")
            pp.kind = PrepPhrase::Kind::From;
        else
            throw CorpusFormatError("unknown pp kind '" + kind + "'");
        pp.noun = p.at("noun").get<std::string>();
        if (p.contains("determiner")) {
            const auto d = p.at("determiner").get<std::string>();
            pp.determiner = parse_or_throw(parse_determiner(d), "determiner", d);
        }
        if (p.contains("adjective")) pp.adjective = p.at("adjective").get<std::string>();
        np.pp = pp;
    }
    return np;
}

}  // namespace

json sentence_to_json(const Sentence& s) {
    const auto& sp = s.spec;
    json spec{{"construction", to_string(sp.construction)}, {"verb", sp.verb}, {"tense", to_string(sp.tense)}};
    if (sp.construction == Construction::INTR_PAD) {
        spec["pronoun"] = *sp.pronoun;
        spec["auxiliary"] = *sp.auxiliary;
    } else {
        spec["agent"] = np_to_json(sp.agent);
        spec["patient"] = np_to_json(sp.patient);
        if (sp.recipient) spec["recipient"] = np_to_json(*sp.recipient);
    }
    if (sp.implausible) spec["implausible"] = true;
    return json{{"text", s.text},
                {"spec", spec},
                {"content_lemmas", s.content_lemmas},
                {"function_words", s.function_words}};
}

Sentence sentence_from_json(const json& j) {
    Sentence s;
    s.text = j.at("text").get<std::string>();
    const auto& spec = j.at("spec");
    auto& sp = s.spec;
    const auto c = spec.at("construction").get<std::string>();
    sp.construction = parse_or_throw(parse_construction(c), "construction", c);
    sp.verb = spec.at("verb").get<std::string>();
    const auto t = spec.at("tense").get<std::string>();
    sp.tense = parse_or_throw(parse_tense(t), "tense", t);
    if (sp.construction == Construction::INTR_PAD) {
        sp.pronoun = spec.at("pronoun").get<std::string>();
        sp.auxiliary = spec.at("auxiliary").get<std::string>();
    } else {
        sp.agent = np_from_json(spec.at("agent"));
        sp.patient = np_from_json(spec.at("patient"));
        if (spec.contains("recipient")) sp.recipient = np_from_json(spec.at("recipient"));
    }
    sp.implausible = spec.value("implausible", false);
    s.content_lemmas = j.at("content_lemmas").get<std::set<std::string>>();
    s.function_words = j.at("function_words").get<std::set<std::string>>();
    return s;
}

json item_to_json(const PrimeTargetItem& item) {
    json pairs = json::array();
    for (const auto& p : item.pairs) {
        json congruent = json::array(), incongruent = json::array();
        for (const auto& s : p.congruent) congruent.push_back(sentence_to_json(s));
        for (const auto& s : p.incongruent) incongruent.push_back(sentence_to_json(s));
        pairs.push_back(json{{"congruent", congruent}, {"incongruent", incongruent}});
    }
    return json{{"schema", kCorpusSchema},
                {"id", item.id},
                {"structure", to_string(item.structure())},
                {"alternation", to_string(item.alternation())},
                {"condition", item.condition},
                {"seed", item.condition.seed},
                {"target", sentence_to_json(item.target)},
                {"pairs", pairs}};
}

PrimeTargetItem item_from_json(const json& j) {
    const auto schema = j.value("schema", std::string());
    if (schema != kCorpusSchema) throw CorpusFormatError("unsupported schema '" + schema + "'");
    PrimeTargetItem item;
    item.id = j.at("id").get<std::string>();
    try {
        item.condition = j.at("condition").get<ConditionSpec>();
    } catch (const ConditionError& e) {
        throw CorpusFormatError(std::string("condition: ") + e.what());
    }
    item.target = sentence_from_json(j.at("target"));
    for (const auto& p : j.at("pairs")) {
        PrimePair pair;
        for (const auto& s : p.at("congruent")) pair.congruent.push_back(sentence_from_json(s));
        for (const auto& s : p.at("incongruent")) pair.incongruent.push_back(sentence_from_json(s));
        item.pairs.push_back(std::move(pair));
    }
    const auto structure = j.at("structure").get<std::string>();
    if (structure != to_string(item.structure()))
        throw CorpusFormatError("structure '" + structure + "' disagrees with the target sentence");
    return item;
}

void write_corpus(std::ostream& out, const std::vector<PrimeTargetItem>& items) {
    for (const auto& item : items) out << item_to_json(item).dump() << '\n';
}

void write_corpus_file(const std::filesystem::path& path, const std::vector<PrimeTargetItem>& items) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_corpus(out, items);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<PrimeTargetItem> read_corpus(std::istream& in, const std::string& name) {
    std::vector<PrimeTargetItem> items;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.empty()) continue;
        try {
            items.push_back(item_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw CorpusFormatError(name + ":" + std::to_string(n) + ": " + e.what());
        } catch (const CorpusFormatError& e) {
            throw CorpusFormatError(name + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return items;
}

std::vector<PrimeTargetItem> read_corpus_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusFormatError("cannot open " + path.string());
    return read_corpus(in, path.string());
}

}  // namespace priming
