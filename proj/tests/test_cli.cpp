#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, bool stderr_only = false) {
    std::string cmd = std::string(RABI_CLI_PATH) + " " + args;
    cmd += stderr_only ? " 2>&1 1>/dev/null" : " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    for (;;) {
        size_t n = fread(buf, 1, sizeof(buf), pipe);
        if (n == 0) break;
        r.out.append(buf, n);
    }
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("constraint subcommand emits exact coefficients and counts") {
    CliResult r = run_cli("constraint --n 2 --delta 6/5 --epsilon 1/2");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["n"] == 2);
    CHECK(j["branch"] == "plus");
    CHECK(j["coeffs_exact"] == json::array({"798/625", "-96/25", "1"}));
    CHECK(j["predicted"] == 2);
    CHECK(j["counted"] == 2);
    REQUIRE(j["couplings_g"].size() == 2);
    CHECK(std::fabs(j["couplings_g"][1].get<double>() - 0.931703900517) < 1e-9);
    CHECK(std::fabs(j["energies"][0].get<double>() -
                    (2.0 - 0.303196045095 * 0.303196045095 + 0.5)) < 1e-9);
}

TEST_CASE("flag values accept decimals and fractions alike") {
    CliResult a = run_cli("constraint --n 1 --delta 1.2 --epsilon 0.5");
    CliResult b = run_cli("constraint --n 1 --delta 6/5 --epsilon 1/2");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("output is byte-identical across runs") {
    std::string args = "constraint --n 3 --delta 6/5 --epsilon 3/10";
    CHECK(run_cli(args).out == run_cli(args).out);

    std::string sweep = "spectrum --delta 1.2 --epsilon 0.5 --g-min 0 --g-max 1 "
                        "--steps 4 --k 3 --n-max 20 --format csv";
    CHECK(run_cli(sweep).out == run_cli(sweep).out);
}

TEST_CASE("constraint round trip verifies itself") {
    std::string path = "cli_roundtrip_tmp.json";
    CliResult first = run_cli("constraint --n 2 --delta 6/5 --epsilon 1/2 --out " + path);
    REQUIRE(first.code == 0);

    CliResult second = run_cli("constraint --n 2 --delta 6/5 --epsilon 1/2 --verify " + path);
    CHECK(second.code == 0);
    json j = json::parse(second.out);
    CHECK(j["verified"] == true);

    CliResult wrong = run_cli("constraint --n 2 --delta 6/5 --epsilon 2/5 --verify " + path);
    CHECK(wrong.code == 1);

    std::remove(path.c_str());
}

TEST_CASE("exit codes: usage, computation, success") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("constraint --help").code == 0);
    CHECK(run_cli("nosuchcommand").code == 2);
    CHECK(run_cli("constraint --n notanumber").code == 2);
    CHECK(run_cli("bethe --branch sideways --n 1").code == 2);

    CliResult broken = run_cli("constraint --n 2 --omega 0 --delta 1", true);
    CHECK(broken.code == 1);
    json err = json::parse(broken.out);
    CHECK(err["error"]["code"] == "NonPositiveOmega");

    CliResult boundary = run_cli("constraint --n 2 --delta 1 --epsilon 0", true);
    CHECK(boundary.code == 1);
    CHECK(json::parse(boundary.out)["error"]["code"] == "Boundary");
}

TEST_CASE("bethe subcommand solves the N=1 closed form") {
    CliResult r = run_cli("bethe --n 1 --delta 6/5 --epsilon 1/2 --g 0.37416573867739413");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["roots"].size() == 1);
    CHECK(std::fabs(j["roots"][0]["re"].get<double>() + 2.2984466804) < 1e-8);
    CHECK(std::fabs(j["roots"][0]["im"].get<double>()) < 1e-10);
    CHECK(std::fabs(j["constraint_residual"].get<double>()) <= 1e-10);
    CHECK(j["residuals"][0].get<double>() <= 1e-10);
    CHECK(j["energy"].get<double>() == doctest::Approx(1.36).epsilon(1e-10));
}

TEST_CASE("heun-check reports the tail residual") {
    CliResult on = run_cli("heun-check --n 1 --delta 6/5 --epsilon 1/2 --g 0.37416573867739413");
    REQUIRE(on.code == 0);
    json j = json::parse(on.out);
    CHECK(j["on_surface"] == true);
    CHECK(std::fabs(j["tail"].get<double>()) < 1e-9);
    CHECK(j["h"][0] == 1.0);

    CliResult off = run_cli("heun-check --n 1 --delta 6/5 --epsilon 1/2 --g 0.9");
    CHECK(json::parse(off.out)["on_surface"] == false);

    // series route unavailable on the minus branch at eps = w/2
    CliResult dead = run_cli("heun-check --n 2 --branch minus --delta 6/5 --epsilon 1/2 --g 0.374", true);
    CHECK(dead.code == 1);
    CHECK(json::parse(dead.out)["error"]["code"] == "VanishingA");
}

TEST_CASE("wavefn-check passes on a solved pair") {
    CliResult r = run_cli("wavefn-check --n 2 --delta 6/5 --epsilon 1/2 --g 0.9317039005170286");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["residual"].get<double>() <= 1e-10);
    CHECK(j["grid_points"].get<int>() == 45);
}

TEST_CASE("crossings and interlace subcommands") {
    CliResult c = run_cli("crossings --n 2 --m 1 --delta 6/5");
    REQUIRE(c.code == 0);
    json j = json::parse(c.out);
    CHECK(j["deviation"].get<double>() <= 1e-9);
    CHECK(j["epsilon"].get<double>() == doctest::Approx(0.5));
    CHECK(j["roots_x"].size() == 2);
    CHECK(j["primed_roots_x"].size() == 2);

    CliResult i = run_cli("interlace --n 4 --delta 6/5 --epsilon 1/2");
    REQUIRE(i.code == 0);
    CHECK(json::parse(i.out)["interlacing"] == true);

    CliResult out = run_cli("interlace --n 4 --delta 3/2 --epsilon 0", true);
    CHECK(out.code == 1);
    CHECK(json::parse(out.out)["error"]["code"] == "OutOfTheoremRange");
}

TEST_CASE("spectrum csv has the pinned header and exact decoupled column") {
    CliResult r = run_cli("spectrum --delta 1.2 --epsilon 0.5 --g-min 0 --g-max 1 "
                          "--steps 3 --k 2 --n-max 24 --format csv");
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "g,E_1,E_2");
    std::string row;
    std::getline(lines, row);
    double g0, e1, e2;
    REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf", &g0, &e1, &e2) == 3);
    CHECK(g0 == 0.0);
    CHECK(e1 == doctest::Approx(-1.3).epsilon(1e-9)); // -sqrt(1.44 + 0.25)
    CHECK(e2 == doctest::Approx(-0.3).epsilon(1e-9));
    int rows = 1;
    while (std::getline(lines, row)) {
        if (!row.empty()) ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("figure subcommand writes csv and svg") {
    CliResult r = run_cli("figure --preset fig3 --steps 5 --n-max 24 --k 6 --out cli_fig_tmp");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["preset"] == "fig3");
    CHECK(j["exceptional_points"].size() == 25);

    std::string csv = slurp("cli_fig_tmp.csv");
    CHECK(csv.rfind("g,E_1,E_2,E_3,E_4,E_5,E_6\n", 0) == 0);

    std::string svg = slurp("cli_fig_tmp.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);

    std::remove("cli_fig_tmp.csv");
    std::remove("cli_fig_tmp.svg");
}
