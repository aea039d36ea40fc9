#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "gtkf/cli.hpp"

using namespace gtkf;
namespace fs = std::filesystem;

namespace {

const std::string kData = GTKF_TEST_DATA;
const std::string kConfigs = GTKF_CONFIG_DIR;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "gtkf");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gtkf_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST(Cli, DecodeToyFiles) {
    const auto r = run({"decode", "--matrix", kData + "/toy_matrix.txt", "--outcome", kData + "/toy_outcome.txt"});
    EXPECT_EQ(r.code, 0) << r.err;
    // Sensor 3 @ step 2 alone covers all three positive tests.
    EXPECT_EQ(r.out, "column,sensor,time\n7,3,2\n");
}

TEST(Cli, DecodeIdentity) {
    const auto dir = scratch("identity");
    std::ofstream(dir / "m.txt") << "3 1 3 0\n100\n010\n001\n";
    std::ofstream(dir / "g.txt") << "101\n";
    const auto r = run({"decode", "--matrix", (dir / "m.txt").string(), "--outcome", (dir / "g.txt").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "column,sensor,time\n1,1,1\n3,3,1\n");
    fs::remove_all(dir);
}

TEST(Cli, Disjunct) {
    auto r = run({"disjunct", "--matrix", kData + "/toy_matrix.txt", "-d", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "d,disjunct\n1,false\n");
    const auto dir = scratch("disjunct");
    std::ofstream(dir / "m.txt") << "3 1 3 0\n100\n010\n001\n";
    r = run({"disjunct", "--matrix", (dir / "m.txt").string(), "--d", "2"});
    EXPECT_EQ(r.out, "d,disjunct\n2,true\n");
    fs::remove_all(dir);
}

TEST(Cli, SimulateIsByteIdentical) {
    const auto a = scratch("sim_a");
    const auto b = scratch("sim_b");
    const auto cfg = kConfigs + "/quick.conf";
    auto r = run({"simulate", "--config", cfg, "--runs", "1", "--seed", "5", "--out", a.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run({"simulate", "--config", cfg, "--runs", "1", "--seed", "5", "--threads", "2", "--out", b.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* name : {"rmse.csv", "errors.csv", "tests.csv"}) {
        EXPECT_FALSE(slurp(a / name).empty()) << name;
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }
    const auto rmse = slurp(a / "rmse.csv");
    EXPECT_EQ(rmse.substr(0, rmse.find('\n')), "step,method,rmse_pos,rmse_vel");
    EXPECT_EQ(count_lines(rmse), 1u + 4u * 20u);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Cli, SimulateMethodSelection) {
    const auto dir = scratch("methods");
    const auto r = run({"simulate", "--config", kConfigs + "/quick.conf", "--runs", "2", "--method", "clairvoyant",
                        "--method", "all_sensors", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rmse = slurp(dir / "rmse.csv");
    EXPECT_NE(rmse.find("clairvoyant"), std::string::npos);
    EXPECT_EQ(rmse.find("proposed"), std::string::npos);
    EXPECT_EQ(slurp(dir / "errors.csv"), "Rb,method,pfa,pm\n");
    fs::remove_all(dir);
}

TEST(Cli, SweepWritesFiveRows) {
    const auto dir = scratch("sweep");
    const auto r = run({"sweep", "--config", kConfigs + "/quick.conf", "--runs", "2", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto sweep = slurp(dir / "sweep.csv");
    EXPECT_EQ(sweep.substr(0, sweep.find('\n')), "Rb,pfa_1,pfa_2,pm_1,pm_2,tests_1,tests_2,bound");
    EXPECT_EQ(count_lines(sweep), 6u);
    for (const char* rb : {"\n100,", "\n1000,", "\n5000,", "\n10000,", "\n50000,"}) {
        EXPECT_NE(sweep.find(rb), std::string::npos) << rb;
    }
    EXPECT_EQ(count_lines(slurp(dir / "errors.csv")), 1u + 10u);
    EXPECT_EQ(count_lines(slurp(dir / "tests.csv")), 1u + 15u);
    fs::remove_all(dir);
}

TEST(Cli, SweepNeedsBothTestingMethods) {
    const auto r = run({"sweep", "--config", kConfigs + "/quick.conf", "--method", "proposed"});
    EXPECT_EQ(r.code, kExitConfig);
}

TEST(Cli, ErrorsAreMachineReadable) {
    auto r = run({"decode", "--matrix", "/nonexistent/m.txt", "--outcome", kData + "/toy_outcome.txt"});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_EQ(r.err.rfind("error: code=2 kind=config message=", 0), 0u) << r.err;

    const auto dir = scratch("errors");
    std::ofstream(dir / "bad.conf") << "sensors = 10\nfrobnicate = 3\n";
    r = run({"simulate", "--config", (dir / "bad.conf").string(), "--out", dir.string()});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("frobnicate"), std::string::npos);

    std::ofstream(dir / "g.txt") << "11\n";
    r = run({"decode", "--matrix", kData + "/toy_matrix.txt", "--outcome", (dir / "g.txt").string()});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("kind=argument"), std::string::npos);
    fs::remove_all(dir);

    r = run({"simulate", "--method", "wizard"});
    EXPECT_EQ(r.code, kExitConfig);
    r = run({});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("kind=usage"), std::string::npos);
    r = run({"teleport"});
    EXPECT_EQ(r.code, kExitConfig);
}

TEST(Cli, Help) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST(Cli, SeparateProcessesAgree) {
    const char* exe = std::getenv("GTKF_CLI");
    if (exe == nullptr) GTEST_SKIP() << "GTKF_CLI not set";
    const auto a = scratch("proc_a");
    const auto b = scratch("proc_b");
    const std::string base = std::string(exe) + " simulate --config " + kConfigs + "/quick.conf --runs 2 --seed 3 --out ";
    ASSERT_EQ(std::system((base + a.string()).c_str()), 0);
    ASSERT_EQ(std::system((base + b.string()).c_str()), 0);
    for (const char* name : {"rmse.csv", "errors.csv", "tests.csv"}) EXPECT_EQ(slurp(a / name), slurp(b / name));
    const std::string bad = std::string(exe) + " decode --matrix /nonexistent --outcome /nonexistent 2>/dev/null";
    const int status = std::system(bad.c_str());
    EXPECT_EQ(WEXITSTATUS(status), kExitConfig);
    fs::remove_all(a);
    fs::remove_all(b);
}
