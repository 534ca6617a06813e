#include "qwork/io.hpp"
#include "qwork/qwork.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace qwork;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QWORK_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(QWORK_DATA_DIR) + "/states/" + name; }

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "qwork_tests";
    fs::create_directories(dir);
    return dir / name;
}

TEST(StateJson, PureRoundTrip) {
    SplitMix64 rng(61);
    for (int t = 0; t < 50; ++t) {
        const auto psi = random_pure_state(2 + t % 3, 1 + t % 4, rng);
        const auto back = std::get<PureState>(io::parse_state(io::to_json(psi).dump()));
        ASSERT_EQ(back.dim_a(), psi.dim_a());
        ASSERT_EQ(back.dim_b(), psi.dim_b());
        ASSERT_LE((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(StateJson, DensityRoundTrip) {
    const auto rho = presets::family_state(MixedFamily::FigC, 0.4);
    const auto back = std::get<DensityMatrix>(io::parse_state(io::to_json(rho).dump()));
    EXPECT_LE((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(StateJson, RejectsMalformedDocuments) {
    EXPECT_THROW(io::parse_state("{\"dimA\": 2, \"dimB\": 2, \"amplitudes\": [[1,0]"), ParseError);
    EXPECT_THROW(io::parse_state("[1, 2, 3]"), ParseError);
    EXPECT_THROW(io::parse_state("{\"dimA\": 2, \"dimB\": 2, \"amplitudes\": [[1,0],[0,0],[0,0]]}"), ParseError);
    EXPECT_THROW(io::parse_state("{\"dimA\": 0, \"dimB\": 2, \"amplitudes\": []}"), ParseError);
    EXPECT_THROW(io::parse_state("{\"dimA\": 1, \"dimB\": 2, \"amplitudes\": [[1,0],[\"x\",0]]}"), ParseError);
    EXPECT_THROW(io::parse_state("{\"something\": 1}"), ParseError);
    // JSON has no NaN literal; an overflowing number is the way to smuggle in inf.
    EXPECT_THROW(io::parse_state("{\"dimA\": 1, \"dimB\": 2, \"amplitudes\": [[1e999,0],[0,0]]}"), ParseError);
    EXPECT_THROW(io::parse_state("{\"dimA\": 1, \"dimB\": 2, \"amplitudes\": [[NaN,0],[0,0]]}"), ParseError);
    EXPECT_THROW(io::read_state_file(data("does_not_exist.json")), ParseError);
    EXPECT_THROW(io::read_state_file(data("malformed.json")), ParseError);
}

TEST(StateJson, RejectsPhysicallyInvalidContent) {
    EXPECT_THROW(io::parse_state("{\"dimA\": 1, \"dimB\": 2, \"amplitudes\": [[0,0],[0,0]]}"), InvalidState);
    EXPECT_THROW(io::parse_state("{\"dim\": 2, \"matrix\": [[1,0],[0,0],[0,0],[1,0]]}"), InvalidState);
}

TEST(StateJson, SampleFilesLoad) {
    const auto om = std::get<PureState>(io::read_state_file(data("omega_max.json")));
    EXPECT_NEAR(fidelity(om, presets::omega_max()), 1.0, 1e-12);
    const auto ot = std::get<PureState>(io::read_state_file(data("omega_tilde.json")));
    EXPECT_NEAR(fidelity(ot, presets::omega()), 1.0, 1e-12);
}

TEST(Presets, ByName) {
    EXPECT_NEAR(fidelity(presets::by_name("omega_tilde:0.2,0.3"), presets::omega_tilde(0.2, 0.3)), 1.0, 1e-14);
    EXPECT_NEAR(fidelity(presets::by_name("phi_me"), presets::phi_me()), 1.0, 1e-14);
    EXPECT_EQ(presets::by_name("prod00").dim_a(), 2);
    EXPECT_EQ(presets::by_name("prod00_3").dim_a(), 3);
    EXPECT_THROW(presets::by_name("nonsense"), ParseError);
}

TEST(Cli, MonotonesOnSampleStates) {
    const auto ok = run_cli("monotones --state " + data("omega_max.json"));
    EXPECT_EQ(ok.code, 0);
    EXPECT_NE(ok.out.find("G = 1.000000"), std::string::npos) << ok.out;
    EXPECT_NE(ok.out.find("criterion PASS"), std::string::npos) << ok.out;

    const auto bad = run_cli("monotones --state " + data("omega_tilde.json"));
    EXPECT_EQ(bad.code, 0);
    EXPECT_NE(bad.out.find("G = 0.000000"), std::string::npos) << bad.out;
    EXPECT_NE(bad.out.find("criterion FAIL"), std::string::npos) << bad.out;
}

TEST(Cli, MonotonesJsonReport) {
    const auto r = run_cli("monotones --preset omega_max --json");
    ASSERT_EQ(r.code, 0);
    const auto doc = io::json::parse(r.out);
    EXPECT_NEAR(doc.at("g_concurrence").get<double>(), 1.0, 1e-9);
    EXPECT_EQ(doc.at("schmidt_rank").get<int>(), 3);
    EXPECT_EQ(doc.at("criterion").get<std::string>(), "PASS");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("monotones --state " + data("malformed.json")).code, 2);
    EXPECT_EQ(run_cli("monotones --state " + data("does_not_exist.json")).code, 2);
    EXPECT_EQ(run_cli("no_such_command").code, 2);
    EXPECT_EQ(run_cli("work --preset omega_max --grid 4").code, 4);
    EXPECT_EQ(run_cli("work --preset omega_max --mode QUBIT_CIRCLE").code, 3);
    EXPECT_EQ(run_cli("monotones --preset omega_tilde:0.9,0.9").code, 4);
    EXPECT_EQ(run_cli("protocol --preset omega_max --corrections phi_me --rounds 10").code, 4);
}

TEST(Cli, WorkReport) {
    const auto r = run_cli("work --preset phi_me --json");
    ASSERT_EQ(r.code, 0);
    const auto doc = io::json::parse(r.out);
    EXPECT_EQ(doc.at("mode").get<std::string>(), "QUBIT_CIRCLE");
    EXPECT_NEAR(doc.at("work").get<double>(), 1.0, 1e-6);
    EXPECT_TRUE(doc.at("converged").get<bool>());
}

TEST(Cli, FigWritesCsvRows) {
    const auto path = scratch("figb.csv");
    const auto r = run_cli("fig FigB 21 " + path.string() + " --grid 8");
    ASSERT_EQ(r.code, 0);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "param,g_concurrence,work,mode,grid");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_NE(line.find(",GRID_AVERAGE,8"), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 21);
}

TEST(Cli, ProtocolJsonEchoesConfigAndGenerator) {
    const auto r = run_cli("protocol --preset omega_max --rounds 1000 --seed 7 --json");
    ASSERT_EQ(r.code, 0);
    const auto doc = io::json::parse(r.out);
    EXPECT_EQ(doc.at("successes").get<std::size_t>(), 1000u);
    EXPECT_EQ(doc.at("success_ratio").get<double>(), 1.0);
    EXPECT_EQ(doc.at("config").at("seed").get<std::uint64_t>(), 7u);
    EXPECT_EQ(doc.at("generator").at("algorithm").get<std::string>(), "splitmix64");
    EXPECT_TRUE(doc.at("feasible").get<bool>());
    // Same seed, same counts.
    EXPECT_EQ(io::json::parse(run_cli("protocol --preset omega_max --rounds 1000 --seed 7 --json").out).at("outcome_counts"),
              doc.at("outcome_counts"));
}

TEST(Cli, ProtocolHalfSuccessOnProductQubit) {
    const auto r = run_cli("protocol --preset prod00 --basis qubit:0.7853981633974483 --corrections phi_me --json");
    ASSERT_EQ(r.code, 0);
    const auto doc = io::json::parse(r.out);
    EXPECT_NEAR(doc.at("success_ratio").get<double>(), 0.5, 3 * std::sqrt(0.25 / 1e5));
    EXPECT_FALSE(doc.at("feasible").get<bool>());
}

TEST(Cli, ExportRoundTrip) {
    const auto path = scratch("exported.json");
    ASSERT_EQ(run_cli("export --preset omega_tilde:0.2,0.3 --out " + path.string()).code, 0);
    const auto back = std::get<PureState>(io::read_state_file(path.string()));
    EXPECT_NEAR(fidelity(back, presets::omega_tilde(0.2, 0.3)), 1.0, 1e-12);
    const auto r = run_cli("criterion --state " + path.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("Schmidt rank = 2"), std::string::npos) << r.out;
}

}  // namespace
