#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "pgg/cli.hpp"

namespace pgg {
namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "pgg_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

const std::filesystem::path kGolden = PGG_GOLDEN_DIR;

TEST(CliPredict, GoldenOutput) {
    const auto r = invoke({"predict", "--k", "4", "--rho", "0,0.25,0.5,0.75,1"});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out, slurp(kGolden / "predict_k4.txt"));
}

TEST(CliPredict, ZeroDensityEqualsDilemmaBound) {
    const auto r = invoke({"predict", "--k", "4", "--rho", "0"});
    EXPECT_EQ(r.out, "k,rho_A,r_low,r_high,r_critical\n4,0,1.000000,5.000000,5.000000\n");
}

TEST(CliPredict, BadArguments) {
    EXPECT_EQ(invoke({"predict", "--k", "0"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"predict", "--k", "4", "--rho", "1.5"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"predict", "--k", "4", "--rho", "a,b"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"predict", "--k", "four"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
}

TEST(CliSimulate, WritesOneRowPerGenerationDeterministically) {
    const auto a = scratch("sim_a.csv");
    const auto b = scratch("sim_b.csv");
    const std::vector<std::string> base{"simulate", "--policy", "mimic", "--r", "2.0", "--rho", "0.5", "--seed", "7",
                                        "--generations", "500", "--grid_width", "8", "--grid_height", "8"};
    auto args = base;
    args.insert(args.end(), {"--out", a.string()});
    const auto first = invoke(args);
    ASSERT_EQ(first.code, cli::kExitOk) << first.err;
    args = base;
    args.insert(args.end(), {"--out", b.string()});
    const auto second = invoke(args);
    ASSERT_EQ(second.code, cli::kExitOk);

    const auto text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 501);
    EXPECT_EQ(first.out, second.out);
    EXPECT_TRUE(std::regex_match(first.out, std::regex("final_mean_p_C=[0-9.e+-]+ final_mean_p_AC=[0-9.e+-]+ "
                                                       "generations=500 lod_mean_p_C=[0-9.e+-]+\n")))
        << first.out;
}

TEST(CliSimulate, ValidationErrorsExitTwoAndNameTheFlag) {
    const auto r = invoke({"simulate", "--policy", "mimic", "--r", "2.0", "--rho", "2.0"});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("rho"), std::string::npos) << r.err;
    EXPECT_EQ(r.err.find("rho_values"), std::string::npos) << r.err;

    EXPECT_EQ(invoke({"simulate", "--policy", "mimic", "--rho", "0.5"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"simulate", "--policy", "baseline", "--r", "2", "--rho", "0.5"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"simulate", "--policy", "mimic", "--r", "2", "--k", "0"}).code, cli::kExitUsage);
}

TEST(CliSimulate, UnwritableOutputIsRuntimeFailure) {
    const auto r = invoke({"simulate", "--policy", "mimic", "--r", "2", "--rho", "0.5", "--generations", "2",
                           "--grid_width", "4", "--grid_height", "4", "--out", "/nonexistent-dir/x.csv"});
    EXPECT_EQ(r.code, cli::kExitRuntime);
}

TEST(CliSimulate, FlagsOverrideConfigFile) {
    const auto cfg = scratch("sim.cfg");
    std::ofstream(cfg) << "policy=mimic\nr_values=3\nrho_values=0.25\ngenerations=9\ngrid_width=4\ngrid_height=4\n";
    const auto r = invoke({"simulate", "--config", cfg.string(), "--generations", "5"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_NE(r.out.find("generations=5"), std::string::npos);
}

std::filesystem::path write_sweep_config(const std::string& name, const std::string& extra = "") {
    const auto path = scratch(name);
    std::ofstream(path) << "policy=mimic\nr_values=1.5,3.0,4.5\nrho_values=0,0.5\nreplicates=2\n"
                           "generations=30\ngrid_width=5\ngrid_height=5\nmaster_seed=11\n"
                        << extra;
    return path;
}

TEST(CliSweep, IdenticalCsvAcrossParallelism) {
    const auto cfg = write_sweep_config("sweep.cfg");
    const auto one = scratch("sweep1.csv");
    const auto eight = scratch("sweep8.csv");
    const auto a = invoke({"sweep", "--config", cfg.string(), "--parallelism", "1", "--out", one.string()});
    const auto b = invoke({"sweep", "--config", cfg.string(), "--parallelism", "8", "--out", eight.string()});
    ASSERT_EQ(a.code, cli::kExitOk) << a.err;
    ASSERT_EQ(b.code, cli::kExitOk) << b.err;
    EXPECT_EQ(slurp(one), slurp(eight));
    EXPECT_EQ(a.out, b.out);
    EXPECT_TRUE(std::regex_match(a.out, std::regex("(rho_A=[0-9.e+-]+ r_critical=([0-9.e+-]+|none)\n){2}"))) << a.out;
}

TEST(CliSweep, UnknownKeyReportsLine) {
    const auto cfg = write_sweep_config("bad.cfg", "colour=blue\n");
    const auto r = invoke({"sweep", "--config", cfg.string()});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("line 9"), std::string::npos) << r.err;
}

TEST(CliSweep, FlagsOverrideConfigAndSeedMapsToMasterSeed) {
    const auto cfg = write_sweep_config("override.cfg");
    const auto x = scratch("override_x.csv");
    const auto y = scratch("override_y.csv");
    invoke({"sweep", "--config", cfg.string(), "--rho_values", "0.5", "--out", x.string()});
    invoke({"sweep", "--config", cfg.string(), "--rho_values", "0.5", "--seed", "11", "--out", y.string()});
    const auto text = slurp(x);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
    EXPECT_EQ(text, slurp(y));
}

TEST(CliSweep, JsonMirror) {
    const auto cfg = write_sweep_config("json.cfg");
    const auto json = scratch("sweep.json");
    std::filesystem::remove(json);
    const auto r = invoke({"sweep", "--config", cfg.string(), "--json", json.string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_TRUE(std::filesystem::exists(json));
}

TEST(CliCritical, GoldenFromFixture) {
    const auto r = invoke({"critical", (kGolden / "sweep_fixture.csv").string()});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out, slurp(kGolden / "critical_fixture.txt"));
    const auto flagged = invoke({"critical", "--in", (kGolden / "sweep_fixture.csv").string()});
    EXPECT_EQ(flagged.out, r.out);
}

TEST(CliCritical, RoundTripsSweepOutput) {
    const auto cfg = write_sweep_config("crit.cfg");
    const auto csv = scratch("crit.csv");
    ASSERT_EQ(invoke({"sweep", "--config", cfg.string(), "--out", csv.string()}).code, cli::kExitOk);
    const auto r = invoke({"critical", csv.string()});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("rho_A,r_observed,r_predicted,abs_error\n0,", 0), 0U) << r.out;
}

TEST(CliCritical, Errors) {
    const auto empty = scratch("header_only.csv");
    std::ofstream(empty) << "policy,k,r,rho_A,replicates,mean_p_C,sd_p_C,mean_p_AC,sd_p_AC,mean_coop_freq,r_critical\n";
    const auto r = invoke({"critical", empty.string()});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("no data rows"), std::string::npos);

    const auto junk = scratch("junk.csv");
    std::ofstream(junk) << "not,a,sweep\n";
    EXPECT_EQ(invoke({"critical", junk.string()}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"critical", "/nonexistent.csv"}).code, cli::kExitUsage);
}

}  // namespace
}  // namespace pgg
