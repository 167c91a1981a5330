#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(BTCLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    for (size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / ("btcli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("analyze the default normal form") {
    Run r = run("analyze");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["model"] == "bt_nf");
    CHECK(j["bt"]["a"].get<double>() == doctest::Approx(1));
    CHECK(j["bt"]["b"].get<double>() == doctest::Approx(1));
    CHECK(j.contains("fd_step"));
    CHECK(j["fd_step_halving_defect"].get<double>() < 1e-5);
    REQUIRE(j["expansions"].size() == 1);
}

TEST_CASE("analyze all variants of HH") {
    Run r = run("analyze --model hh --variant all");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["expansions"].size() == 3);
    CHECK(j["bt"]["a"].get<double>() == doctest::Approx(1.85542718024e-3).epsilon(1e-6));
}

TEST_CASE("lpseries writes csv and json") {
    fs::path d = scratch();
    Run r = run("lpseries --order 5 --out " + (d / "lp.csv").string());
    REQUIRE(r.code == 0);
    std::string csv = slurp(d / "lp.csv");
    CHECK(csv.rfind("i,tau_i,sigma_i\n0,10/7,6\n1,0,0\n2,288/2401,18/49\n", 0) == 0);
    json j = json::parse(slurp(d / "lp.json"));
    CHECK(j["order"] == 5);
    CHECK(j["omega"][1][1] == "-6/7");
    CHECK(j["tau"][4] == "-240192/45294865");
    fs::remove_all(d);
}

TEST_CASE("predict and correct") {
    Run p = run("predict --eps 0.1 --ntst 10 --ncol 3");
    REQUIRE(p.code == 0);
    json jp = json::parse(p.out);
    CHECK(jp["orbit"].size() == 31);
    CHECK(jp["alpha"][0].get<double>() == doctest::Approx(-4e-4));

    Run c = run("correct --model hh --ntst 20 --ncol 3");
    REQUIRE(c.code == 0);
    json jc = json::parse(c.out);
    CHECK(jc["corrected"]["residual"].get<double>() <= 1e-10);
    CHECK(jc["corrected"]["halvings"] == 0);
    CHECK(jc["corrected"]["tangent_alpha"].size() == 2);
}

TEST_CASE("convergence csv") {
    fs::path d = scratch();
    Run r = run("converge --methods lp --orders 1 --amplitudes 1e-3:1e-2:2 --ntst 20 --ncol 3 --out " +
                (d / "c.csv").string());
    REQUIRE(r.code == 0);
    std::istringstream is(slurp(d / "c.csv"));
    std::string line;
    std::getline(is, line);
    CHECK(line.rfind("# delta", 0) == 0);
    std::getline(is, line);
    CHECK(line == "model,method,variant,order,amplitude,eps,delta,iterations,converged");
    int n = 0;
    while (std::getline(is, line)) n += line.back() == '1';
    CHECK(n == 2);
    fs::remove_all(d);
}

TEST_CASE("model files") {
    fs::path d = scratch();
    std::ofstream(d / "m.txt") << "# quadratic unfolding\ndim 2\npar p q\nx1' = x2\nx2' = p + q*x2 + x1^2 + x1*x2\n";
    std::string m = (d / "m.txt").string();
    Run r = run("analyze --model " + m + " --x0 0 0 --alpha0 0 0");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["bt"]["b"].get<double>() == doctest::Approx(1));
    CHECK(run("analyze --model " + m).code == 2);
    std::ofstream(d / "bad.txt") << "dim 2\npar p q\nx1' = x2 +\nx2' = p\n";
    CHECK(run("analyze --model " + (d / "bad.txt").string() + " --x0 0 0 --alpha0 0 0").code != 0);
    fs::remove_all(d);
}

TEST_CASE("exit codes") {
    CHECK(run("").code == 2);
    CHECK(run("analyze --bogus").code == 2);
    CHECK(run("predict --order 7").code == 2);
    CHECK(run("predict --method xx").code == 2);
    CHECK(run("lpseries --order 0").code == 2);
    CHECK(run("lpseries --order 1").code == 0);
    CHECK(run("converge --amplitudes 1:2").code == 2);
    CHECK(run("analyze --nf-a 0").code == 3);
    CHECK(run("analyze --nf-b 0").code == 3);
}
