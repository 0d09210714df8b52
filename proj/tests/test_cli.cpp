#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(BSX_CLI) + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    const int status = pclose(f);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    std::string l;
    while (std::getline(ss, l))
        if (!l.empty()) v.push_back(l);
    return v;
}

}  // namespace

TEST_CASE("eval emits one record per grid point with the majorant above the target") {
    auto r = run("eval --kind M --lambda 1 --c auto --delta 1 --grid -5:5:101");
    CHECK(r.code == 0);
    const auto ls = lines(r.out);
    CHECK(ls.size() == 101);
    for (const auto& l : ls) {
        const auto j = nlohmann::json::parse(l);
        CHECK(j["approx"].get<double>() >= j["target"].get<double>() - 1e-9);
    }
}

TEST_CASE("csv and jsonl carry the same numbers") {
    auto j = run("eval --kind Lnu --measure power:alpha=1 --delta 1 --grid 0.01:50:200:log");
    auto c = run("eval --kind Lnu --measure power:alpha=1 --delta 1 --grid 0.01:50:200:log --format csv");
    REQUIRE(j.code == 0);
    REQUIRE(c.code == 0);
    const auto jl = lines(j.out), cl = lines(c.out);
    REQUIRE(cl.size() == jl.size() + 1);
    CHECK(cl[0] == "x,target,approx,margin");
    for (size_t i = 0; i < jl.size(); ++i) {
        const auto rec = nlohmann::json::parse(jl[i]);
        std::stringstream ss(cl[i + 1]);
        std::string cell;
        for (const char* key : {"x", "target", "approx", "margin"}) {
            std::getline(ss, cell, ',');
            // bit-identical doubles
            CHECK(std::stod(cell) == rec[key].get<double>());
        }
        CHECK(rec["margin"].get<double>() >= -1e-9);
    }
}

TEST_CASE("repeated runs are byte-identical") {
    const std::string args = "eval --kind Kodd --lambda 0.7 --grid -3:3:77:chebyshev";
    CHECK(run(args).out == run(args).out);
    CHECK(run("errors --lambda 1 --all-kinds").out == run("errors --lambda 1 --all-kinds").out);
}

TEST_CASE("exit codes") {
    CHECK(run("eval --kind M --lambda 1 --c 1.5").code == 3);
    CHECK(run("errors --measure power:alpha=1 --kind majorant").code == 3);
    CHECK(run("eval --kind Q").code == 2);
    CHECK(run("eval --grid 1:2").code == 2);
    CHECK(run("eval --lambda abc").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("verify sign --kind L").code == 2);
    CHECK(run("eval", "BSX_TOL=x").code == 2);
    CHECK(run("verify type --kind M --k 2 --ymax 500").code == 4);
}

TEST_CASE("BSX_TOL sets the evaluation tolerance") {
    auto r = run("verify l1 --kind K --lambda 1", "BSX_TOL=1e-9");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["params_echo"]["tol"].get<double>() == 1e-9);
}

TEST_CASE("errors table") {
    auto r = run("errors --lambda 1 --c auto --delta 1 --all-kinds");
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[1].find("0.27817743667428857") != std::string::npos);
    CHECK(ls[2].find("0.23408357254495238") != std::string::npos);
    CHECK(ls[3].find("0.39803698628360529") != std::string::npos);
    auto a = run("errors --measure atoms:1:1 --delta 1 --kind minorant");
    REQUIRE(a.code == 0);
    CHECK(lines(a.out)[1].find("0.23408357254495238") != std::string::npos);
    auto chk = run("errors --lambda 0.1,5 --delta 1,2 --kind K --check --format jsonl");
    REQUIRE(chk.code == 0);
    const auto cl = lines(chk.out);
    CHECK(cl.size() == 4);
    for (const auto& l : cl) CHECK(nlohmann::json::parse(l)["rel_mismatch"].get<double>() < 1e-6);
}

TEST_CASE("verify writes certificates") {
    auto s = run("verify sign --lambda 1 --c auto --delta 1 --grid -20:20:100000");
    CHECK(s.code == 0);
    const auto j = nlohmann::json::parse(s.out);
    CHECK(j["schema"] == "bsx-cert/1");
    CHECK(j["passed"] == true);
    CHECK(run("verify nodes --kind L --lambda 2 --c auto --range 1:20 --derivatives").code == 0);
    CHECK(run("verify type --kind K --lambda 1 --c auto --k 1 --ymax 20").code == 0);
    CHECK(run("verify l1 --kind M --lambda 1").code == 0);
    CHECK(run("verify oracle --kind K --lambda 0.1").code == 0);
    CHECK(run("verify majorant --kind Mnu --measure power:alpha=1.5 --grid 1e-4:40:3000:log").code == 0);
    // check and kind must agree
    CHECK(run("verify majorant --kind L --lambda 1").code == 2);
    CHECK(run("verify type --kind M --lambda 1 --k 1 --ymax 20").code == 1);
}
