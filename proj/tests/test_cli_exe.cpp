#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kHeader = "delta,mu_delta,repair,download,total,normalized_total";

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("dscost_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CmdResult {
    int status = -1;
    std::string out;
    std::string err;
};

CmdResult cli(const std::string& args) {
    static int counter = 0;
    const fs::path so = work_dir() / ("stdout" + std::to_string(counter));
    const fs::path se = work_dir() / ("stderr" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(DSCOST_CLI_PATH) + " " + args + " >" +
                            so.string() + " 2>" + se.string();
    const int rc = std::system(cmd.c_str());
    CmdResult res;
    res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    res.out = slurp(so);
    res.err = slurp(se);
    return res;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream(p) << text;
    return p;
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("analyze emits the pinned csv schema and a summary") {
    const fs::path out = work_dir() / "curve.csv";
    const CmdResult res = cli("--out " + out.string() + " analyze --mu-delta 0.1");
    REQUIRE(res.status == 0);

    const std::string table = slurp(out);
    CHECK(first_line(table) == kHeader);
    // one grid point: header + row
    CHECK(std::count(table.begin(), table.end(), '\n') == 2);
    std::istringstream row(table.substr(table.find('\n') + 1));
    std::string cell;
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == doctest::Approx(0.1 / 50.0));
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == doctest::Approx(0.1));
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == doctest::Approx(475.81551993617956));

    const json summary = json::parse(res.out);
    CHECK(summary["command"] == "analyze");
    CHECK(summary["code"] == "mds[10,2,2]");
    CHECK(summary["rows"] == 1);
}

TEST_CASE("analyze to stdout keeps the table clean") {
    const CmdResult res = cli("analyze --mu-delta 0.5");
    REQUIRE(res.status == 0);
    CHECK(first_line(res.out) == kHeader);
    // summary retreats to stderr
    CHECK(json::parse(res.err)["command"] == "analyze");
}

TEST_CASE("simulate reruns are byte-identical") {
    const fs::path a = work_dir() / "sim_a.csv";
    const fs::path b = work_dir() / "sim_b.csv";
    const std::string args = " simulate --mu-delta 0.5 --intervals 100000 --seed 7";
    REQUIRE(cli("--out " + a.string() + args).status == 0);
    REQUIRE(cli("--out " + b.string() + args).status == 0);
    const std::string ta = slurp(a);
    CHECK(ta == slurp(b));
    CHECK(first_line(ta) == kHeader);

    // grids too, replicated
    const std::string grid_args =
        " simulate --delta-grid log:0.05:1:4 --intervals 2000 --replications 3 --seed ";
    const fs::path c = work_dir() / "sim_c.csv";
    const fs::path d = work_dir() / "sim_d.csv";
    REQUIRE(cli("--out " + c.string() + grid_args + "9").status == 0);
    REQUIRE(cli("--out " + d.string() + grid_args + "9").status == 0);
    CHECK(slurp(c) == slurp(d));

    // and a different seed actually changes the numbers
    const fs::path e = work_dir() / "sim_e.csv";
    REQUIRE(cli("--out " + e.string() + grid_args + "10").status == 0);
    CHECK(slurp(c) != slurp(e));
}

TEST_CASE("simulate summary carries the estimator detail") {
    const CmdResult res = cli(
        "--out /dev/null simulate --mu-delta 0.5 --intervals 5000 --replications 4 "
        "--seed 3");
    REQUIRE(res.status == 0);
    const json summary = json::parse(res.out);
    CHECK(summary["engine"] == "simulated");
    CHECK(summary["seed"] == 3);
    CHECK(summary["replications"] == 4);
    const json& result = summary["result"];
    CHECK(result["pr_d2d_download"].get<double>() > 0.99);
    CHECK(result["ci_halfwidth_95"]["total"].get<double>() > 0.0);
    CHECK(result["intervals_simulated"] == 20000);
}

TEST_CASE("optimal-delta reports an exact zero for repair-hungry codes") {
    const fs::path cfg = write_file(
        "mbr.json", R"({"code": {"family": "mbr", "n": 10, "h": 3, "r": 9}})");
    const CmdResult res = cli("--config " + cfg.string() + " optimal-delta");
    REQUIRE(res.status == 0);
    const json summary = json::parse(res.out);
    CHECK(summary["delta_star"] == 0.0);
    CHECK(summary["mu_delta_star"] == 0.0);
    CHECK(summary["cost_star"].get<double>() == doctest::Approx(243.75));
}

TEST_CASE("delta-max agrees with the library") {
    const CmdResult res = cli("delta-max --tol 1e-10");
    REQUIRE(res.status == 0);
    const json summary = json::parse(res.out);
    CHECK(summary["mu_delta_max"].get<double>() == doctest::Approx(1.46739).epsilon(1e-4));
    CHECK(summary["grid_points"] == 400);

    const fs::path cfg = write_file(
        "cheap_bs.json", R"({"network": {"bs_cost": 2}})");
    const CmdResult none = cli("--config " + cfg.string() + " delta-max");
    REQUIRE(none.status == 0);
    CHECK(json::parse(none.out)["delta_max"] == "none");
}

TEST_CASE("sweep-rho covers the reference code set") {
    const fs::path out = work_dir() / "rho.csv";
    const CmdResult res =
        cli("--out " + out.string() + " sweep-rho --rho-grid lin:2:200:2");
    REQUIRE(res.status == 0);
    const std::string table = slurp(out);
    CHECK(first_line(table) == "rho,code,mu_delta_max");
    CHECK(std::count(table.begin(), table.end(), '\n') == 13);  // 2 rho x 6 codes
    CHECK(table.find(",none") != std::string::npos);      // rho = 2 rows
    CHECK(table.find("rep[5,1,1]") != std::string::npos);
    CHECK(table.find("mbr[10,3,9]") != std::string::npos);
}

TEST_CASE("validate flags infeasible profiles without failing") {
    const fs::path cfg = write_file(
        "fat.json", R"({"code": {"family": "replication", "n": 12}})");
    const CmdResult res = cli("--config " + cfg.string() + " validate");
    REQUIRE(res.status == 0);
    const json summary = json::parse(res.out);
    CHECK(summary["feasible"] == false);
    CHECK(summary["violations"].size() >= 1);
}

TEST_CASE("json table format") {
    const CmdResult res = cli("--format json analyze --mu-delta 0.1");
    REQUIRE(res.status == 0);
    const json table = json::parse(res.out);
    CHECK(table["engine"] == "analytic");
    REQUIRE(table["rows"].size() == 1);
    CHECK(table["rows"][0]["mu_delta"].get<double>() == doctest::Approx(0.1));
}

TEST_CASE("failure modes map to distinct exit codes") {
    // config errors: exit 1
    const fs::path broken = write_file("broken.json", "{ not json");
    CHECK(cli("--config " + broken.string() + " analyze").status == 1);
    const fs::path unknown = write_file("unknown.json", R"({"networks": {}})");
    CHECK(cli("--config " + unknown.string() + " analyze").status == 1);
    const fs::path bad_code =
        write_file("bad_code.json", R"({"code": {"family": "mds", "n": 10, "k": 12}})");
    CHECK(cli("--config " + bad_code.string() + " analyze").status == 1);
    CHECK(cli("analyze --delta-grid log:5:1:10").status == 1);
    CHECK(cli("simulate --mu-delta 0").status == 1);
    CHECK(cli("analyze --mu-delta 0.1 --format xml").status == 1);
    CHECK(cli("").status == 1);            // missing subcommand
    CHECK(cli("frobnicate").status == 1);  // unknown subcommand

    // i/o failures: exit 3
    CHECK(cli("--config /nonexistent/место.json analyze").status == 3);
    CHECK(cli("--out /nonexistent-dir/x.csv analyze --mu-delta 0.1").status == 3);

    // --help is not an error
    CHECK(cli("--help").status == 0);

    // stderr carries a reason on failure
    const CmdResult res = cli("--config " + broken.string() + " analyze");
    CHECK(res.err.find("config error") != std::string::npos);
}
