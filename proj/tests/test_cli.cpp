#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "biclique/graph_io.hpp"
#include "biclique/verify.hpp"
#include "cli_dispatch.hpp"

using namespace biclique;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "biclique");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(BICLIQUE_DATA_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("biclique_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

    static std::string read(const std::string& path) {
        std::ifstream in(path);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, VerifyT1OnPaley9) {
    ASSERT_EQ(run({"paley", "--q", "9", "--d", "2", "--out", tmp("g.json")}).code, 0);
    auto r = run({"verify", "t1", "--graph", tmp("g.json"), "--k", "2", "--ell", "2", "--cert", tmp("c.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    auto cert = nlohmann::json::parse(read(tmp("c.json")));
    EXPECT_EQ(cert["t1_holds"], true);

    auto bad = run({"verify", "t1", "--graph", tmp("g.json"), "--k", "1", "--ell", "1"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_EQ(nlohmann::json::parse(bad.out)["t1_holds"], false);
}

TEST_F(CliTest, SolveCliqueOnC4NotFound) {
    auto r = run({"solve", "clique", "--graph", data("c4.txt"), "--k", "3"});
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["found"], false);
    EXPECT_TRUE(j["witness"].empty());
    EXPECT_EQ(run({"solve", "clique", "--graph", data("k3.txt"), "--k", "3"}).code, 0);
    EXPECT_EQ(run({"solve", "clique", "--graph", data("petersen.txt"), "--k", "3"}).code, 1);
}

TEST_F(CliTest, PipelineToyOnTriangle) {
    auto r = run({"--seed", "7", "reduce", "pipeline", "--graph", data("k3.txt"), "--k", "3", "--mode", "toy", "--out",
                  tmp("gp.txt"), "--provenance", tmp("prov.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto prov = nlohmann::json::parse(read(tmp("prov.json")));
    EXPECT_EQ(prov["seed"], 7);
    EXPECT_EQ(prov["gap"], true);
    const auto k2 = prov["k2"].get<std::size_t>();
    // The subset budget is a worst-case count; the pruned search is fast here.
    auto s = run({"--force", "solve", "biclique", "--graph", tmp("gp.txt"), "--s", std::to_string(k2), "--t", std::to_string(k2)});
    EXPECT_EQ(s.code, 0) << s.err;

    // C_5 has no triangle, so no balanced biclique either.
    ASSERT_EQ(run({"--seed", "7", "reduce", "pipeline", "--graph", data("c5.txt"), "--k", "3", "--mode", "toy", "--out",
                   tmp("c5.txt"), "--provenance", tmp("p5.json")})
                  .code,
              0);
    const auto k5 = nlohmann::json::parse(read(tmp("p5.json")))["k2"].get<std::size_t>();
    EXPECT_EQ(run({"--force", "solve", "biclique", "--graph", tmp("c5.txt"), "--s", std::to_string(k5), "--t", std::to_string(k5)}).code, 1);
}

TEST_F(CliTest, SeededCommandsAreReproducible) {
    for (int i = 0; i < 2; ++i) {
        ASSERT_EQ(run({"--seed", "5", "sample", "--nl", "20", "--nr", "30", "--p", "0.4", "--out", tmp("s" + std::to_string(i) + ".txt")}).code, 0);
        ASSERT_EQ(run({"--seed", "5", "reduce", "pipeline", "--graph", data("c4.txt"), "--k", "3", "--mode", "toy", "--out",
                       tmp("p" + std::to_string(i) + ".txt")})
                      .code,
                  0);
        ASSERT_EQ(run({"--seed", "5", "sweep", "--n", "3", "4", "--k", "3", "--trials", "4", "--h", "2", "--out",
                       tmp("w" + std::to_string(i) + ".csv")})
                      .code,
                  0);
        ASSERT_EQ(run({"--seed", "5", "verify", "weil", "--q", "25", "--d", "4", "--s", "2", "--k", "2", "--samples", "50",
                       "--cert", tmp("weil" + std::to_string(i) + ".json")})
                      .code,
                  0);
    }
    for (auto f : {"s", "p", "w", "weil"}) {
        const std::string ext = std::string(f) == "w" ? ".csv" : (std::string(f) == "weil" ? ".json" : ".txt");
        EXPECT_EQ(read(tmp(f + std::string("0") + ext)), read(tmp(f + std::string("1") + ext))) << f;
        EXPECT_FALSE(read(tmp(f + std::string("0") + ext)).empty()) << f;
    }
    EXPECT_NE(read(tmp("w0.csv")).find("n,k,trials,success_fraction,precondition_met"), std::string::npos);
}

TEST_F(CliTest, JobsDoNotChangeResults) {
    ASSERT_EQ(run({"--seed", "3", "sample", "--nl", "24", "--nr", "40", "--p", "0.5", "--out", tmp("g.txt")}).code, 0);
    auto a = run({"--jobs", "1", "verify", "t1", "--graph", tmp("g.txt"), "--k", "3", "--ell", "3"});
    auto b = run({"--jobs", "4", "verify", "t1", "--graph", tmp("g.txt"), "--k", "3", "--ell", "3"});
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, UsageAndValidationErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"verify", "t1", "--k", "2"}).code, 2);                                       // missing --graph
    EXPECT_EQ(run({"field", "--q", "12"}).code, 2);                                             // not a prime power
    EXPECT_EQ(run({"paley", "--q", "7", "--d", "4", "--out", tmp("x.txt")}).code, 2);           // d ∤ q−1
    EXPECT_EQ(run({"paley", "--q", "131072", "--d", "1", "--out", tmp("x.txt")}).code, 2);      // over --max-q
    EXPECT_EQ(run({"threshold", "--n", "2", "--k", "4"}).code, 2);                              // k ≢ 5 mod 6
    EXPECT_EQ(run({"sample", "--nl", "2", "--nr", "2", "--p", "1.5", "--out", tmp("x.txt")}).code, 2);
    EXPECT_EQ(run({"solve", "clique", "--graph", tmp("missing.txt"), "--k", "3"}).code, 2);
    EXPECT_EQ(run({"reduce", "pipeline", "--graph", data("c4.txt"), "--k", "3", "--mode", "psychic"}).code, 2);
    EXPECT_EQ(run({"--max-subsets", "10", "solve", "clique", "--graph", data("petersen.txt"), "--k", "3"}).code, 2);
    EXPECT_EQ(run({"--force", "--max-subsets", "10", "solve", "clique", "--graph", data("petersen.txt"), "--k", "3"}).code, 1);
    EXPECT_EQ(run({"--jobs", "0", "field", "--q", "7"}).code, 2);

    std::ofstream(tmp("bad.txt")) << "3\n0 1\n1 7\n";
    auto r = run({"solve", "clique", "--graph", tmp("bad.txt"), "--k", "2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, FieldAndThreshold) {
    auto f = run({"field", "--q", "7"});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_EQ(nlohmann::json::parse(f.out)["generator_coeffs"], nlohmann::json::array({3}));
    auto t = run({"threshold", "--n", "2", "--k", "5"});
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_EQ(nlohmann::json::parse(t.out)["q"], 729);
}

TEST_F(CliTest, VerifyFamilies) {
    ASSERT_EQ(run({"paley", "--q", "27", "--d", "2", "--out", tmp("g27.txt")}).code, 0);
    EXPECT_EQ(run({"verify", "ktfree", "--graph", tmp("g27.txt"), "--a", "3", "--b", "7"}).code, 0);
    EXPECT_EQ(run({"verify", "ktfree", "--graph", tmp("g27.txt"), "--a", "2", "--b", "2"}).code, 1);
    EXPECT_EQ(run({"verify", "intersection", "--q", "49", "--d", "3", "--s", "2", "--k", "1"}).code, 0);
    EXPECT_EQ(run({"verify", "partition", "--q", "13", "--s", "3"}).code, 0);

    ASSERT_EQ(run({"paley", "--q", "25", "--d", "4", "--s", "3", "--out", tmp("p.json")}).code, 0);
    EXPECT_EQ(run({"verify", "t2", "--graph", tmp("p.json"), "--k", "1", "--h", "1"}).code, 0);
    EXPECT_EQ(run({"verify", "t2", "--graph", tmp("p.json"), "--k", "2", "--h", "24"}).code, 1);
}

TEST_F(CliTest, ReduceStages) {
    EXPECT_EQ(run({"reduce", "double-cover", "--graph", data("k3.txt"), "--out", tmp("dc.txt")}).code, 0);
    auto dc = std::get<BipartiteGraph>(read_graph(tmp("dc.txt")));
    EXPECT_EQ(dc.edge_count(), 6u);
    EXPECT_EQ(run({"reduce", "pad", "--graph", data("c4.txt"), "--k", "3", "--out", tmp("pad.txt")}).code, 0);
    EXPECT_EQ(std::get<SimpleGraph>(read_graph(tmp("pad.txt"))).size(), 6u);
    EXPECT_EQ(run({"solve", "clique", "--graph", tmp("pad.txt"), "--k", "5"}).code, 1);
    EXPECT_EQ(run({"reduce", "balance", "--graph", tmp("dc.txt"), "--s", "1", "--t", "2", "--out", tmp("b.txt")}).code, 0);
    EXPECT_EQ(run({"reduce", "balance", "--graph", tmp("dc.txt"), "--s", "3", "--t", "2", "--out", tmp("b.txt")}).code, 2);
    EXPECT_EQ(run({"reduce", "ccsp", "--graph", tmp("dc.txt"), "--k", "1", "--solve"}).code, 0);
    // The two isolated vertices of k3.txt make the complement rich up to K_{3,3}.
    EXPECT_EQ(run({"reduce", "ccsp", "--graph", tmp("dc.txt"), "--k", "3", "--solve"}).code, 0);
    EXPECT_EQ(run({"reduce", "ccsp", "--graph", tmp("dc.txt"), "--k", "4", "--solve"}).code, 1);
}

TEST_F(CliTest, SolveIntersection) {
    std::ofstream(tmp("sets.json")) << "[[1,2],[2,3],[2,4]]";
    auto r = run({"solve", "intersection", "--sets", tmp("sets.json"), "--k", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["size"], 1);
}
