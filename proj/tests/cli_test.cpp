#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "priming/corpus_io.hpp"
#include "priming/generator.hpp"
#include "test_support.hpp"

using namespace priming;
using namespace priming::testing;

namespace {

struct Result {
    int code = -1;
    std::string out;  // stdout and stderr
};

Result cli(const std::string& args) {
    const std::string cmd = std::string(PRIMING_CLI) + " " + args + " 2>&1";
    Result r;
    FILE* p = ::popen(cmd.c_str(), "r");
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string lexicon() { return "--lexicon-dir " + kFixtureDir.string(); }

}  // namespace

TEST(Cli, GenerateValidateScoreReport) {
    TempDir dir;
    auto r = cli("generate --condition core --structure DO --structure PO --targets 5 --primes-per-target 2 --seed 3 " +
                 lexicon() + " --out " + (dir / "run").string());
    ASSERT_EQ(r.code, 0) << r.out;
    const auto do_file = (dir / "run" / "corpus" / "core_DO.jsonl").string();
    const auto po_file = (dir / "run" / "corpus" / "core_PO.jsonl").string();
    r = cli("validate --corpus " + do_file + " --corpus " + po_file + " " + lexicon());
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("0 violations"), std::string::npos);
    for (const auto& [in, out] : {std::pair{do_file, "do.jsonl"}, std::pair{po_file, "po.jsonl"}}) {
        r = cli("score --corpus " + in + " --out " + (dir / out).string() + " --scorer uniform");
        ASSERT_EQ(r.code, 0) << r.out;
    }
    r = cli("report --scores " + (dir / "do.jsonl").string() + " --scores " + (dir / "po.jsonl").string() +
            " --out " + (dir / "report").string());
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(std::filesystem::exists(dir / "report" / "report.json"));
    EXPECT_NE(r.out.find("15000"), std::string::npos);
}

TEST(Cli, InjectedVerbOverlapFailsValidation) {
    TempDir dir;
    auto c = parse_condition_tag("core");
    c.targets_per_structure = 6;
    c.primes_per_target = 3;
    auto items = build_structure_corpus(c, Construction::DO, fixture_lexicon()).items;
    // Give one prime the target's verb, choosing a pair where that still realizes.
    bool injected = false;
    for (auto& item : items) {
        for (auto& pair : item.pairs) {
            auto spec = pair.prime().spec;
            spec.verb = item.target.spec.verb;
            try {
                auto cong = realize(spec, fixture_lexicon());
                auto inc = realize(alternate(spec), fixture_lexicon());
                pair.congruent[0] = cong;
                pair.incongruent[0] = inc;
                injected = true;
            } catch (const RealizationError&) {
                continue;
            }
            break;
        }
        if (injected) break;
    }
    ASSERT_TRUE(injected);
    write_corpus_file(dir / "bad.jsonl", items);
    auto r = cli("validate --corpus " + (dir / "bad.jsonl").string() + " " + lexicon());
    EXPECT_EQ(r.code, 2) << r.out;
    EXPECT_NE(r.out.find("1 violations"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("verb_disjoint"), std::string::npos) << r.out;
}

TEST(Cli, EmptyCorpusHasNoItems) {
    TempDir dir;
    dir.write("empty.jsonl", "");
    auto r = cli("validate --corpus " + (dir / "empty.jsonl").string() + " " + lexicon());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("no items"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\"exit_code\":2"), std::string::npos) << r.out;
}

TEST(Cli, UsageAndScorerErrors) {
    EXPECT_EQ(cli("generate --bogus").code, 1);
    EXPECT_EQ(cli("").code, 1);
    EXPECT_EQ(cli("generate --condition recency_9 " + lexicon() + " --out /tmp/x").code, 1);
    TempDir dir;
    ASSERT_EQ(cli("generate --condition core --structure ACT --targets 2 --primes-per-target 1 " + lexicon() +
                  " --out " + (dir / "run").string())
                  .code,
              0);
    auto r = cli("score --corpus " + (dir / "run" / "corpus" / "core_ACT.jsonl").string() + " --out " +
                 (dir / "s.jsonl").string() + " --scorer remote --scorer-url http://127.0.0.1:9");
    EXPECT_EQ(r.code, 3) << r.out;
    EXPECT_NE(r.out.find("/v1/health"), std::string::npos) << r.out;
}

TEST(Cli, Cochran) {
    auto r = cli("cochran");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("16590\n", 0), 0u) << r.out;
    EXPECT_EQ(cli("cochran --z 1.96 --margin 0.05").out.rfind("385\n", 0), 0u);
}
