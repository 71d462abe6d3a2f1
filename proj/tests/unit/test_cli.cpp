#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcnap/cli.hpp"
#include "pcnap/corpus.hpp"

using namespace pcnap;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return CliRun{code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("pcnap_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, ExitCodes) {
    fs::path dir = scratch("codes");
    std::string good = write(dir / "gap.json", serialize_instance(gap_instance(3)));
    std::string bad = write(dir / "bad.json", "{not json");
    EXPECT_EQ(cli({"validate", "--instance", good}).code, exit_ok);
    EXPECT_EQ(cli({"validate", "--instance", bad}).code, exit_validation);
    EXPECT_EQ(cli({"validate", "--instance", (dir / "missing.json").string()}).code, exit_validation);
    EXPECT_EQ(cli({"nonsense"}).code, exit_usage);
    EXPECT_EQ(cli({}).code, exit_usage);
    EXPECT_EQ(cli({"oracle", "--instance", good, "--cap", "10"}).code, exit_cap);
    EXPECT_EQ(cli({"solve", "--instance", good, "--mode", "float:abc"}).code, exit_validation);
    EXPECT_EQ(cli({"solve", "--instance", good, "--mode", "float:1e-9"}).code, exit_ok);
    EXPECT_EQ(cli({"gap-demo", "--m", "1"}).code, exit_validation);
    // A mandatory demand with no way to meet it.
    std::string stuck = write(dir / "stuck.json", R"({"nodes":["a","b"],"weights":[0,1],"candidate_edges":[],
        "demands":[{"s":"a","t":"b","r":1,"penalty":"inf"}]})");
    EXPECT_EQ(cli({"solve", "--instance", stuck}).code, exit_infeasible);
}

TEST(Cli, GapDemo) {
    for (int m : {2, 3, 5}) {
        CliRun r = cli({"gap-demo", "--m", std::to_string(m)});
        ASSERT_EQ(r.code, 0);
        EXPECT_NE(r.out.find("\"natural_lp\": \"1/" + std::to_string(m) + "\""), std::string::npos) << r.out;
        EXPECT_NE(r.out.find("\"pclp\": \"1\""), std::string::npos) << r.out;
        EXPECT_NE(r.out.find("\"oracle\": \"1\""), std::string::npos) << r.out;
    }
}

TEST(Cli, EmptyCorpus) {
    fs::path dir = scratch("empty");
    fs::path out = dir / "corpus";
    EXPECT_EQ(cli({"corpus", "--seed", "1", "--count", "0", "--out", out.string()}).code, 0);
    EXPECT_TRUE(fs::is_directory(out));
    EXPECT_TRUE(fs::is_empty(out));
}

TEST(Cli, CorpusAndSolveAreReproducible) {
    fs::path dir = scratch("repro");
    auto a = dir / "a", b = dir / "b";
    ASSERT_EQ(cli({"corpus", "--seed", "5", "--count", "6", "--out", a.string()}).code, 0);
    ASSERT_EQ(cli({"corpus", "--seed", "5", "--count", "6", "--out", b.string()}).code, 0);
    int files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
        ++files;
    }
    EXPECT_GE(files, 6);
    std::string inst = (a / "inst_0002.json").string();
    CliRun s1 = cli({"solve", "--instance", inst, "--audit"});
    CliRun s2 = cli({"solve", "--instance", inst, "--audit"});
    EXPECT_EQ(s1.code, 0);
    EXPECT_EQ(s1.out, s2.out);
    CliRun t1 = cli({"spider-trace", "--instance", inst});
    CliRun t2 = cli({"spider-trace", "--instance", inst});
    EXPECT_EQ(t1.out, t2.out);
}

TEST(Cli, DumpAndTraceFiles) {
    fs::path dir = scratch("dump");
    std::string good = write(dir / "gap.json", serialize_instance(gap_instance(2)));
    auto lp = dir / "lp.txt", tr = dir / "trace.jsonl", res = dir / "res.json";
    ASSERT_EQ(cli({"solve", "--instance", good, "--dump-lp", lp.string(), "--trace", tr.string(), "--out",
                   res.string()})
                  .code,
              0);
    EXPECT_NE(slurp(lp).find("PCLP_round_1"), std::string::npos);
    EXPECT_FALSE(slurp(tr).empty());
    EXPECT_NE(slurp(res).find("\"objective\""), std::string::npos);
    CliRun a = cli({"lp-audit", "--instance", good});
    EXPECT_EQ(a.code, 0);
    EXPECT_NE(a.out.find("\"pclp\""), std::string::npos);
}
