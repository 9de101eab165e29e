#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "seqbell/cli/app.h"
#include "seqbell/cli/commands.h"
#include "seqbell/cli/config.h"
#include "seqbell/cli/matrix_io.h"

using namespace seqbell;
using namespace seqbell::cli;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation run(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("seqbell_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string &name, const std::string &text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir_;
};

std::size_t count_lines(const std::string &s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

const char *kPrBox = "2 2 2 2\n0.5 0 0 0.5\n0.5 0 0 0.5\n0.5 0 0 0.5\n0 0.5 0.5 0\n";

}  // namespace

TEST(MatrixIo, ComplexTokens) {
    EXPECT_EQ(parse_complex("1.5"), Complex(1.5, 0.0));
    EXPECT_EQ(parse_complex("0.5-2i"), Complex(0.5, -2.0));
    EXPECT_EQ(parse_complex("-i"), Complex(0.0, -1.0));
    EXPECT_EQ(parse_complex("3i"), Complex(0.0, 3.0));
    EXPECT_THROW(parse_complex("1+x"), ConfigError);
    const Complex z(0.1, -1.0 / 3.0);
    EXPECT_EQ(parse_complex(format_complex(z)), z);
}

TEST(MatrixIo, MatrixAndBehaviorFiles) {
    const CMatrix m = parse_matrix("0.5 0.5i\n-0.5i 0.5\n", "<test>");
    EXPECT_EQ(m(0, 1), Complex(0.0, 0.5));
    EXPECT_THROW(parse_matrix("1 0\n0\n", "<test>"), ConfigError);
    const BehaviorTable t = parse_behavior_table(kPrBox, "<test>");
    EXPECT_EQ(t.settings_a(), 2u);
    EXPECT_NEAR(t.correlator(1, 1), -1.0, 1e-15);
    EXPECT_THROW(parse_behavior_table("2 2 2\n", "<test>"), ConfigError);
}

TEST(Config, KeysAndErrors) {
    const ScenarioConfig cfg = parse_config("state.alpha_sq = 0.9  # comment\nobservable.z.theta = 0\n");
    EXPECT_DOUBLE_EQ(cfg.alpha_sq, 0.9);
    EXPECT_THROW(parse_config("state.alpha_sq = 0.9\nstate.alpha_sq = 0.8\n"), ConfigError);
    EXPECT_THROW(parse_config("nonsense\n"), ConfigError);
    EXPECT_THROW(parse_config("state.alpha_sq = abc\n"), ConfigError);
    EXPECT_THROW(parse_config("protocol.settings = a,b\n"), ConfigError);
    EXPECT_THROW(parse_config("filter.balancing.file = x.txt\n"), ConfigError);
}

TEST_F(CliTest, StateCommand) {
    const Invocation r = run({"state"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("-0.32"), std::string::npos);
    EXPECT_NE(r.out.find("max CHSH: 1.788854382"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run({"state", "--set", "bogus=1"}).code, kExitParse);
    EXPECT_EQ(run({"state", "--set", "state.alpha_sq"}).code, kExitParse);
    EXPECT_EQ(run({"frobnicate"}).code, kExitParse);
    EXPECT_EQ(run({"state", "--format", "xml"}).code, kExitParse);
    EXPECT_EQ(run({"state", "--format", "csv"}).code, kExitParse);
    const Invocation range = run({"protocol", "--set", "state.p1=1.2"});
    EXPECT_EQ(range.code, kExitDomain);
    EXPECT_NE(range.err.find("state.p1"), std::string::npos);
    EXPECT_EQ(run({"protocol", "--set", "state.alpha_sq=0.3"}).code, kExitDomain);
    const Invocation degenerate = run({"protocol", "--set", "state.p1=0.5"});
    EXPECT_EQ(degenerate.code, kExitDegenerate);
    EXPECT_NE(degenerate.err.find("DegenerateProtocol"), std::string::npos);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(CliTest, NonPsdMatrixFileIsRejected) {
    write("rho.txt", "0.5 0 0 0.6\n0 0 0 0\n0 0 0 0\n0.6 0 0 0.5\n");
    const std::string cfg = write("run.cfg", "state.kind = matrix\nstate.matrix_file = rho.txt\n");
    const Invocation r = run({"state", "--config", cfg});
    EXPECT_EQ(r.code, kExitDomain);
    EXPECT_NE(r.err.find("NotPsd"), std::string::npos);
}

TEST_F(CliTest, ProtocolReportsHiddenNonlocality) {
    const Invocation r = run({"protocol"});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("hidden nonlocality exhibited"), std::string::npos);
    const Invocation j = run({"protocol", "--format", "json"});
    ASSERT_EQ(j.code, kExitOk);
    const auto doc = nlohmann::json::parse(j.out);
    EXPECT_NEAR(doc["post"]["max_chsh"].get<double>(), 2.0 * std::sqrt(1.16), 1e-9);
    EXPECT_EQ(doc["verdict"], "hidden nonlocality exhibited");
}

TEST_F(CliTest, IdentityCustomFilterLeavesChshUnchanged) {
    write("id.txt", "1 0\n0 1\n");
    const std::string cfg = write("run.cfg", "protocol.mode = custom\nfilter.f.file = id.txt\nprotocol.a.filter = f\n");
    const Invocation r = run({"protocol", "--config", cfg, "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["pre"]["max_chsh"].get<double>(), doc["post"]["max_chsh"].get<double>(), 1e-12);
    EXPECT_EQ(doc["verdict"], "no violation");
}

TEST_F(CliTest, SweepCsvIsStableAndConsistent) {
    const std::vector<std::string> args{"sweep", "--set", "sweep.resolution=5", "--set", "protocol.allow_role_swap=true"};
    const Invocation a = run(args);
    const Invocation b = run(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    std::istringstream in(a.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, kSweepVersionLine);
    std::getline(in, line);
    EXPECT_EQ(line, kSweepHeader);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        const auto cells = split_csv(line);
        ASSERT_EQ(cells.size(), 8u) << line;
        if (cells[2] == "true") {
            EXPECT_LE(std::stod(cells[3]), 2.0 + 1e-9);
        }
    }
    EXPECT_EQ(rows, 25u);
}

TEST_F(CliTest, SweepWritesOutputFile) {
    const std::string path = (dir_ / "grid.csv").string();
    const Invocation r = run({"sweep", "--set", "sweep.resolution=2", "--out", path});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(count_lines(ss.str()), 6u);
}

TEST_F(CliTest, LhvCheck) {
    const std::string pr = write("pr.txt", kPrBox);
    const Invocation r = run({"lhv-check", "--table", pr, "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["verdict"], "infeasible");
    EXPECT_NEAR(doc["lhv"]["certificate"]["value"].get<double>(), 4.0, 1e-9);
    EXPECT_NEAR(doc["lhv"]["certificate"]["local_bound"].get<double>(), 2.0, 1e-9);

    const std::string uni = write("uniform.txt", "2 2 2 2\n" + std::string(4, ' ') +
                                                    "0.25 0.25 0.25 0.25\n0.25 0.25 0.25 0.25\n"
                                                    "0.25 0.25 0.25 0.25\n0.25 0.25 0.25 0.25\n");
    const Invocation u = run({"lhv-check", "--table", uni});
    ASSERT_EQ(u.code, kExitOk);
    EXPECT_NE(u.out.find("verdict: feasible"), std::string::npos);

    const std::string sig = write("sig.txt", "2 2 2 2\n1 0 0 0\n0 0 1 0\n1 0 0 0\n0 0 1 0\n");
    const Invocation s = run({"lhv-check", "--table", sig});
    ASSERT_EQ(s.code, kExitOk);
    EXPECT_NE(s.err.find("signalling"), std::string::npos);
    EXPECT_NE(s.out.find("verdict: infeasible"), std::string::npos);

    const std::string bad = write("bad.txt", "2 2 2 2\n0.5 0.5 0.5 0.5\n0.25 0.25 0.25 0.25\n0.25 0.25 0.25 0.25\n"
                                             "0.25 0.25 0.25 0.25\n");
    EXPECT_EQ(run({"lhv-check", "--table", bad}).code, kExitDomain);
    EXPECT_EQ(run({"lhv-check"}).code, kExitParse);
}

TEST_F(CliTest, LoopholeIsDeterministic) {
    const Invocation a = run({"loophole"});
    const Invocation b = run({"loophole"});
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("post-selected CHSH: 4"), std::string::npos);
    const auto doc = nlohmann::json::parse(run({"loophole", "--format", "json"}).out);
    EXPECT_EQ(doc["post_selected_chsh"].get<double>(), 4.0);
}

TEST_F(CliTest, JsonConfigEchoRoundTrips) {
    const std::string cfg = write("run.cfg", "state.alpha_sq = 0.85\nstate.p1 = 0.65\nobservable.x.theta = 1.5707963267948966\n"
                                             "observable.x.phi = 0\nsweep.resolution = 3\nlhv.tol = 1e-10\n");
    const Invocation r = run({"protocol", "--config", cfg, "--format", "json", "--seed", "7"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    std::string rebuilt;
    for (const auto &[k, v] : doc["config"].items()) rebuilt += k + " = " + v.get<std::string>() + "\n";
    const ScenarioConfig parsed = parse_config(rebuilt, "<echo>", dir_);
    nlohmann::json again = nlohmann::json::object();
    for (const auto &[k, v] : config_entries(parsed)) again[k] = v;
    EXPECT_EQ(again, doc["config"]);
    EXPECT_EQ(parsed.seed, 7u);
    EXPECT_DOUBLE_EQ(parsed.alpha_sq, 0.85);
}
