#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ouspread/app.hpp"
#include "ouspread/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ouspread");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = ouspread::run_app(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ouspread_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SolveWritesTheReferenceBoundaries) {
    const auto r = run({"solve"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 502u);
    EXPECT_EQ(rows.front(), "t,exit_long,entry_long");
    EXPECT_EQ(rows.back(), "1.0,0,0");
}

TEST_F(Cli, SmallestGrid) {
    const auto r = run({"solve", "--steps", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1].substr(0, 4), "0.0,");
    EXPECT_EQ(rows[2].substr(0, 4), "0.5,");
    EXPECT_EQ(rows[3], "1.0,0,0");
}

TEST_F(Cli, ChooserColumnsAreMirrorImages) {
    const auto r = run({"solve", "--strategy", "chooser", "--steps", "100"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    EXPECT_EQ(rows.front(), "t,exit_long,exit_short");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto a = rows[i].find(','), b = rows[i].rfind(',');
        const double up = ouspread::parse_number(rows[i].substr(a + 1, b - a - 1));
        const double dn = ouspread::parse_number(rows[i].substr(b + 1));
        EXPECT_NEAR(up, -dn, 1e-8) << rows[i];
    }
}

TEST_F(Cli, SolveToFileWritesDiagnostics) {
    const auto out = path("fig1.csv");
    const auto r = run({"solve", "--steps", "50", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    ASSERT_TRUE(fs::exists(out));
    const auto diag = ouspread::read_file(path("fig1.diag.json"));
    EXPECT_NE(diag.find("\"max_residual\""), std::string::npos);
    EXPECT_NE(diag.find("\"steps\": 50"), std::string::npos);

    const auto json = run({"solve", "--steps", "2", "--format", "json"});
    ASSERT_EQ(json.code, 0);
    EXPECT_NE(json.out.find("\"exit_long\""), std::string::npos);
}

TEST_F(Cli, ConfigFileAndFlags) {
    const auto cfg = path("cfg.json");
    ouspread::write_file(cfg, R"({"steps": 4, "strategy": "cost-exit", "fee": 0.02})");
    auto r = run({"solve", "--config", cfg});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = lines(r.out);
    EXPECT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows.front(), "t,cost_exit");
    EXPECT_EQ(rows.back(), "1.0," + ouspread::format_number(0.01 * 0.02 / 16.01));
    // flags override the file
    r = run({"solve", "--config", cfg, "--steps", "3"});
    EXPECT_EQ(lines(r.out).size(), 5u);
}

TEST_F(Cli, PointValueAtTheHorizon) {
    const auto r = run({"value", "--steps", "20", "--t", "1", "--x", "0.07", "--role", "exit-long"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "0.07\n");
}

TEST_F(Cli, PointQueryMatchesGridCell) {
    const std::vector<std::string> common{"value", "--strategy", "chooser", "--steps", "100"};
    auto grid_args = common;
    for (const char* a : {"--t-points", "5", "--x-points", "3", "--x-min", "-0.05", "--x-max", "0.05"})
        grid_args.emplace_back(a);
    const auto grid = run(grid_args);
    ASSERT_EQ(grid.code, 0) << grid.err;
    const auto rows = lines(grid.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "x\\t,t=0,t=0.25,t=0.5,t=0.75,t=1");
    // row x = 0.05, column t = 0.25
    const auto& row = rows[3];
    std::vector<std::string> cells;
    std::istringstream in(row);
    for (std::string c; std::getline(in, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_EQ(cells[0], "0.05");
    EXPECT_EQ(cells[5], "0");

    auto point_args = common;
    for (const char* a : {"--t", "0.25", "--x", "0.05"}) point_args.emplace_back(a);
    const auto point = run(point_args);
    ASSERT_EQ(point.code, 0) << point.err;
    EXPECT_EQ(point.out, cells[2] + "\n");

    // even in x at zero mean
    const auto mirrored = lines(grid.out)[1];
    EXPECT_EQ(mirrored.substr(mirrored.find(',')), row.substr(row.find(',')));
}

TEST_F(Cli, LoadedBoundariesGiveTheSameValues) {
    const auto csv = path("b.csv");
    ASSERT_EQ(run({"solve", "--steps", "100", "--out", csv}).code, 0);
    const auto loaded = run({"value", "--steps", "100", "--boundaries", csv, "--t", "0.3", "--x", "-0.02"});
    const auto fresh = run({"value", "--steps", "100", "--t", "0.3", "--x", "-0.02"});
    ASSERT_EQ(loaded.code, 0) << loaded.err;
    EXPECT_EQ(loaded.out, fresh.out);
    const auto wrong = run({"value", "--strategy", "chooser", "--boundaries", csv, "--t", "0", "--x", "0"});
    EXPECT_EQ(wrong.code, 2);
}

TEST_F(Cli, InputErrorsExitWithTwo) {
    auto r = run({"value", "--steps", "20", "--t", "2", "--x", "0"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("outside"), std::string::npos);
    EXPECT_EQ(run({"value", "--steps", "20", "--t", "0.5"}).code, 2);
    EXPECT_EQ(run({"value", "--steps", "20", "--t", "0", "--x", "0", "--role", "both"}).code, 2);
    EXPECT_EQ(run({"value", "--steps", "20", "--t", "0", "--x", "0", "--role", "exit_short"}).code, 2);
    EXPECT_EQ(run({"solve", "--fee", "0.01"}).code, 2);
    EXPECT_EQ(run({"solve", "--steps", "1"}).code, 2);
    EXPECT_EQ(run({"solve", "--sigma", "-1"}).code, 2);
    EXPECT_NE(run({"solve", "--strategy", "nope"}).code, 0);
    EXPECT_NE(run({}).code, 0);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, SolverFailureNamesTheStep) {
    const auto r = run({"solve", "--steps", "100", "--quadrature", "right-rectangle"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("step 98"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("t = 0.98"), std::string::npos) << r.err;
}

TEST_F(Cli, SimulationIsDeterministic) {
    const std::vector<std::string> args{"simulate", "--steps", "50", "--paths", "500", "--seed", "5"};
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("\"n_paths\": 500"), std::string::npos);

    auto one = run({"simulate", "--steps", "50", "--paths", "1", "--seed", "9"});
    EXPECT_EQ(one.out, run({"simulate", "--steps", "50", "--paths", "1", "--seed", "9"}).out);

    const auto deep = run({"simulate", "--steps", "50", "--paths", "200", "--x0", "-0.3"});
    ASSERT_EQ(deep.code, 0) << deep.err;
    EXPECT_NE(deep.out.find("\"entry_rate\": 1.0"), std::string::npos) << deep.out;
}

TEST_F(Cli, OutputFilesAreByteIdentical) {
    const auto a = path("a.csv"), b = path("b.csv");
    ASSERT_EQ(run({"solve", "--steps", "60", "--strategy", "short-long", "--out", a}).code, 0);
    ASSERT_EQ(run({"solve", "--steps", "60", "--strategy", "short-long", "--out", b}).code, 0);
    EXPECT_EQ(ouspread::read_file(a), ouspread::read_file(b));
    EXPECT_EQ(ouspread::read_file(path("a.diag.json")), ouspread::read_file(path("b.diag.json")));
}

TEST_F(Cli, ValidatePassesAndCatchesCorruption) {
    const auto csv = path("b.csv");
    ASSERT_EQ(run({"solve", "--out", csv}).code, 0);
    const auto ok = run({"validate", "--boundaries", csv, "--paths", "5000"});
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_NE(ok.out.find("\"passed\": true"), std::string::npos);

    // push one interior exit node below its successor
    auto rows = lines(ouspread::read_file(csv));
    const std::string bad_row = "0.5,0.001,-0.01";
    rows[251] = bad_row;
    std::string text;
    for (const auto& l : rows) text += l + "\n";
    const auto broken = path("broken.csv");
    ouspread::write_file(broken, text);
    const auto r = run({"validate", "--boundaries", broken, "--paths", "2000"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("\"passed\": false"), std::string::npos);
    EXPECT_NE(r.out.find("monotone/exit_long"), std::string::npos);
}
