#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fano/report.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fano;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(FANO_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string fan(const std::string& name) { return std::string(FANO_DATA_DIR) + "/fans/" + name; }

std::string flag(const ojson& report, const char* name) {
    return report["spectrum"]["flags"][name]["value"].get<std::string>();
}

}  // namespace

TEST_CASE("analyze X_4 through the library") {
    RunConfig cfg;
    cfg.command = "analyze";
    cfg.n = 4;
    cfg.terms = 0;
    const auto r = run_command(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.report["schema"] == kSchema);
    CHECK(flag(r.report, "property_O1") == "true");
    CHECK(flag(r.report, "property_OA") == "false");
    CHECK(r.report["spectrum"]["flags"]["conjecture_O"] == "true");
    CHECK(r.report["batyrev_matching_distance"].get<double>() < 1e-8);
}

TEST_CASE("analyze X'_4") {
    RunConfig cfg;
    cfg.command = "analyze";
    cfg.family = "xnp";
    cfg.n = 4;
    cfg.terms = 0;
    const auto r = run_command(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.report["spectrum"]["flags"]["conjecture_O"] == "false");
}

TEST_CASE("analyze a fan file") {
    const auto r = cli("analyze --fan " + fan("p2.json") + " --terms 200");
    REQUIRE(r.status == 0);
    const auto j = ojson::parse(r.out);
    for (const char* f : {"property_O1", "property_O2", "condition_star", "property_OA"}) CHECK(flag(j, f) == "true");
    CHECK(j["critical_points"]["found"] == 3);
    CHECK(std::abs(j["period_fit"]["T_estimate"].get<double>() - 3.0) < 0.03);
}

TEST_CASE("validate-fan") {
    CHECK(cli("validate-fan --fan " + fan("bl3.json")).status == 0);

    const auto bad = std::filesystem::temp_directory_path() / "fano_cli_bad_fan.json";
    std::ofstream(bad) << R"({"dim": 2, "rays": [[1, 0], [0, 1]], "cones": [[0, 1]]})";
    const auto r = cli("validate-fan --fan " + bad.string());
    CHECK(r.status == 1);
    const auto j = ojson::parse(r.out);
    CHECK(j["valid"] == false);
    CHECK(j.contains("error"));
    std::filesystem::remove(bad);

    CHECK(cli("validate-fan --fan /nonexistent/fan.json").status == 1);
}

TEST_CASE("argument errors") {
    CHECK(cli("").status != 0);
    CHECK(cli("analyze --family nope").status != 0);
    CHECK(cli("analyze --n 0").status == 1);
    CHECK(cli("analyze --family xnp --n 2").status == 1);
    CHECK(cli("gamma-limit --n 2 --digits 20").status == 1);
    CHECK(cli("scan --family xnp --n 4").status == 1);
}

TEST_CASE("gamma-limit refuses where the rightmost eigenvalue is not simple") {
    // T_+ and T_- of X_4 meet near q2 = 4636; locate the closest grid point
    const auto s = scan_ray(4, 1.0, log_grid(4600, 4700, 401));
    REQUIRE(s.min_separation < 1e-3);
    std::ostringstream q2;
    q2.precision(17);
    q2 << s.min_separation_q2;
    const auto r = cli("gamma-limit --n 4 --q2 " + q2.str());
    CHECK(r.status == 1);
    const auto j = ojson::parse(r.out);
    CHECK(j.contains("refused"));
    CHECK(j["condition_star"]["value"] != "true");
    CHECK_FALSE(j.contains("gamma_limit"));
}

TEST_CASE("gamma-limit report for X_2") {
    const auto r = cli("gamma-limit --n 2 --t 10 20 30 40");
    REQUIRE(r.status == 0);
    const auto j = ojson::parse(r.out);
    CHECK(j["condition_star"]["value"] == "true");
    CHECK(j["gamma_limit"]["angle_to_gamma"].get<double>() < 1e-4);
    CHECK(j["gamma_limit"]["samples"].size() == 4);
}

TEST_CASE("scan and tropical CSV/JSON output") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = dir / "fano_cli_scan.csv";
    const auto out = dir / "fano_cli_scan.json";
    const auto r = cli("scan --n 5 --grid 12 --csv " + csv.string() + " --out " + out.string());
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    const auto j = ojson::parse(in);
    CHECK(j["scan"]["census_ok"] == true);
    std::ifstream c(csv);
    std::string header;
    std::getline(c, header);
    CHECK(header.rfind("q1,q2,branch_id", 0) == 0);
    std::filesystem::remove(csv);
    std::filesystem::remove(out);

    const auto t = cli("tropical --n 3 --lambda 1");
    CHECK(t.status == 0);
    CHECK(ojson::parse(t.out)["tropical"]["matches_2_percent"] == true);
}

TEST_CASE("reports are byte-identical across runs") {
    for (const std::string args : {"analyze --n 3 --terms 100", "period --n 2 --terms 150", "scan --n 4 --grid 10"}) {
        const auto a = cli(args), b = cli(args);
        CHECK(a.status == 0);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}
