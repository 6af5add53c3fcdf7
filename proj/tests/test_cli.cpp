#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_stdout.tmp";
    const std::string err_path = "cli_stderr.tmp";
    const std::string cmd =
        std::string("\"") + VIPV_CLI_PATH + "\" " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

const std::string D = VIPV_DATA_DIR;
const std::string kLcaArgs =
    "lca --inventory " + D + "/panel_cn_nl.inv --factors " + D + "/gwp100.csv";
const std::string kDataArgs = " --inventory " + D + "/panel_cn_nl.inv --factors " + D +
                              "/gwp100.csv --cycle " + D + "/wltp_class3.csv --countries " + D +
                              "/countries.csv";

int count_lines(const std::string& text, bool skip_comments) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line))
        if (!skip_comments || line.empty() || line[0] != '#') ++n;
    return n;
}

} // namespace

TEST_CASE("cli: exit codes") {
    SUBCASE("success") { CHECK(run_cli(kLcaArgs).code == 0); }
    SUBCASE("help") { CHECK(run_cli("--help").code == 0); }
    SUBCASE("usage error") { CHECK(run_cli("lca --no-such-flag").code == 2); }
    SUBCASE("missing subcommand") { CHECK(run_cli("").code == 2); }
    SUBCASE("missing input file names the path") {
        RunResult r = run_cli("lca --inventory /no/such.inv --factors " + D + "/gwp100.csv");
        CHECK(r.code == 2);
        CHECK(r.err.find("/no/such.inv") != std::string::npos);
    }
    SUBCASE("solver failure maps to 3") {
        const std::string path = "nonproductive.tmp.inv";
        {
            std::ofstream f(path);
            f << "[activities]\nactivity a \"A\" unit=kg root stage\n  input a 2 kg\n";
        }
        RunResult r = run_cli("lca --inventory " + path + " --factors " + D + "/gwp100.csv");
        std::remove(path.c_str());
        CHECK(r.code == 3);
        CHECK(r.err.find("non-productive") != std::string::npos);
    }
}

TEST_CASE("cli: lca output embeds provenance") {
    RunResult r = run_cli(kLcaArgs);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"provenance\"") != std::string::npos);
    CHECK(r.out.find("fnv64:") != std::string::npos);
    CHECK(r.out.find("\"total\"") != std::string::npos);
    CHECK(r.out.find("panel_cn_nl.inv") != std::string::npos);
}

TEST_CASE("cli: design --bev produces a panel-free vehicle") {
    RunResult r = run_cli("design --bev --cycle " + D + "/wltp_class3.csv --countries " + D +
                          "/countries.csv --country NL");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"cell_count\": 0.0") != std::string::npos);
    CHECK(r.out.find("\"panel_power_w\": 0.0") != std::string::npos);
}

TEST_CASE("cli: config overlay changes the model") {
    const std::string cfg = "overlay.tmp.json";
    {
        std::ofstream f(cfg);
        f << "{\"params\": {\"glider_mass_kg\": 1000.0}}";
    }
    RunResult r = run_cli("--config " + cfg + " design --bev --cycle " + D +
                          "/wltp_class3.csv --countries " + D + "/countries.csv --country NL");
    std::remove(cfg.c_str());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"glider_mass_kg\": 1000.0") != std::string::npos);
}

TEST_CASE("cli: repeated runs are byte-identical") {
    SUBCASE("lca") {
        RunResult a = run_cli(kLcaArgs);
        RunResult b = run_cli(kLcaArgs);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
    }
    SUBCASE("sweep (parallel cells)") {
        const std::string args =
            "sweep" + kDataArgs + " --country NL --areas 0:3:0.5 --lifetimes 0:300000:25000";
        RunResult a = run_cli(args);
        RunResult b = run_cli(args);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("cli: sweep emits the documented grid shape") {
    RunResult r =
        run_cli("sweep" + kDataArgs + " --country NL --areas 0:3:0.5 --lifetimes 0:300000:25000");
    REQUIRE(r.code == 0);
    // 7 areas x 13 lifetimes plus the header; comment lines carry provenance
    CHECK(count_lines(r.out, true) == 7 * 13 + 1);
    CHECK(r.out.find("# tipping_km") != std::string::npos);
    CHECK(r.out.find("area_m2,lifetime_km,relative_delta") != std::string::npos);
}

TEST_CASE("cli: map lists every bundled country") {
    RunResult r = run_cli("map" + kDataArgs);
    REQUIRE(r.code == 0);
    CHECK(count_lines(r.out, true) == 12 + 1);
    CHECK(r.out.find("GR,") != std::string::npos);
    CHECK(r.out.find("SE,") != std::string::npos);
}

TEST_CASE("cli: --out writes the same bytes as stdout") {
    const std::string out = "lca_out.tmp.json";
    RunResult direct = run_cli(kLcaArgs);
    RunResult filed = run_cli(kLcaArgs + " --out " + out);
    REQUIRE(direct.code == 0);
    REQUIRE(filed.code == 0);
    CHECK(slurp(out) == direct.out);
    std::remove(out.c_str());
}

TEST_CASE("cli: golden regression on the headline figures") {
    RunResult r = run_cli(kLcaArgs);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"total\": 117.99999999999999") != std::string::npos);
    CHECK(r.out.find("\"transport_share\": 0.008") != std::string::npos);
}
