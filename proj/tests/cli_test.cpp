#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / (std::string("expander_cli_") + info->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    Result run(const std::string& args) {
        const auto o = dir / "stdout", e = dir / "stderr";
        const std::string cmd = "cd '" + dir.string() + "' && '" EXPANDER_BIN "' " + args + " >'" + o.string() +
                                "' 2>'" + e.string() + "'";
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
    }
};

}  // namespace

TEST_F(Cli, ConstructWritesArtifacts) {
    auto r = run("construct --q 2 --d 2 --e 3 --out art");
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"spec.json", "generators.json", "edges.txt"}) EXPECT_TRUE(fs::exists(dir / "art" / f)) << f;
    std::ifstream edges(dir / "art" / "edges.txt");
    std::string header, line;
    std::getline(edges, header);
    EXPECT_EQ(header, "# 504 3");
    std::size_t lines = 0;
    while (std::getline(edges, line)) ++lines;
    EXPECT_EQ(lines, 504u * 3 / 2);
    auto gens = nlohmann::json::parse(slurp(dir / "art" / "generators.json"));
    EXPECT_EQ(gens["generators"].size(), 3u);
    EXPECT_EQ(gens["run_config"]["command"], "construct");
    EXPECT_EQ(gens["tool"]["name"], "expander");
}

TEST_F(Cli, UnsupportedConfigurationsExitTwo) {
    auto r = run("construct --q 3 --d 2 --e 2 --out x");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("gcd"), std::string::npos) << r.err;
    EXPECT_EQ(run("construct --q 2 --d 2 --e 1 --out x").code, 2);
}

TEST_F(Cli, VerifyArtifact) {
    ASSERT_EQ(run("construct --q 2 --d 2 --e 3 --out art").code, 0);
    auto r = run("verify art --out report.json");
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    bool ramanujan = false;
    for (const auto& v : j["result"]["report"]["verdicts"])
        if (v["name"] == "ramanujan") ramanujan = v["pass"];
    EXPECT_TRUE(ramanujan);
    EXPECT_EQ(run("verify art --tol 1e-12 --out tight.json").code, 0);
}

TEST_F(Cli, VerifyRejectsBrokenRegularity) {
    ASSERT_EQ(run("construct --q 2 --d 2 --e 3 --out art").code, 0);
    std::ifstream in(dir / "art" / "edges.txt");
    std::ofstream out(dir / "broken.txt");
    std::string line;
    for (int i = 0; std::getline(in, line); ++i)
        if (i != 7) out << line << "\n";
    out.close();
    auto r = run("verify broken.txt");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("regularity"), std::string::npos) << r.err;

    fs::copy_file(dir / "broken.txt", dir / "art" / "edges.txt", fs::copy_options::overwrite_existing);
    r = run("verify art");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("regularity"), std::string::npos) << r.err;
}

TEST_F(Cli, OutputsAreByteIdentical) {
    ASSERT_EQ(run("verify --q 3 --d 2 --e 1 --out r.json").code, 0);
    const auto first = slurp(dir / "r.json");
    ASSERT_EQ(run("verify --q 3 --d 2 --e 1 --out r.json").code, 0);
    EXPECT_EQ(first, slurp(dir / "r.json"));
    EXPECT_NE(first.find("\"run_config\""), std::string::npos);
    EXPECT_NE(first.find("\"version\""), std::string::npos);
}

TEST_F(Cli, SeedFromEnvironment) {
    ::setenv("EXPANDER_SEED", "4", 1);
    auto r = run("verify --q 5 --d 2 --e 1 --out r.json");
    ::unsetenv("EXPANDER_SEED");
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(slurp(dir / "r.json"));
    EXPECT_EQ(j["run_config"]["seed"], 4);
    EXPECT_EQ(j["result"]["params"]["seed"], 4);
}

TEST_F(Cli, SurveyTables) {
    std::ofstream(dir / "empty.json") << "{}";
    auto r = run("survey empty.json --format csv");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "family,p,q,d,e,seed,n,k,classification,lambda,bound,verdict,runtime_ms\n");

    std::ofstream(dir / "s.json") << R"({"selberg": {"p": [3, 5]}, "rows": [{"family": "lsv", "q": 2, "e": 1}]})";
    r = run("survey s.json --jobs 2 --out t.json");
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(slurp(dir / "t.json"));
    ASSERT_EQ(j["rows"].size(), 3u);
    EXPECT_TRUE(j["rows"][0]["unsupported"].get<bool>());
    EXPECT_EQ(j["rows"][1]["family"], "selberg");
}

TEST_F(Cli, RegressDistinguishesDrift) {
    const fs::path golden = fs::path(LIEEXP_GOLDEN_DIR) / "regress";
    auto r = run("regress '" + golden.string() + "'");
    EXPECT_EQ(r.code, 0) << r.out << r.err;

    r = run("regress '" + golden.string() + "' --tol 1e-10");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("config drift: tol"), std::string::npos) << r.out;
    EXPECT_EQ(r.out.find("value drift"), std::string::npos) << r.out;

    fs::create_directories(dir / "g");
    auto j = nlohmann::json::parse(slurp(golden / "regress.json"));
    j["rows"][2]["lambda"] = j["rows"][2]["lambda"].get<double>() + 1e-6;
    std::ofstream(dir / "g" / "regress.json") << j.dump(2);
    r = run("regress g");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("value drift: " + j["rows"][2]["family"].get<std::string>()), std::string::npos) << r.out;
    EXPECT_EQ(r.out.find("config drift"), std::string::npos);
}
