#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

struct Run {
    std::string out;
    int status = -1;
};

// stdout and stderr together.
Run run(const std::string& args) {
    std::string cmd = "'" + std::string(EISCONG_CLI) + "' " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

// "..." in the expectation skips any run of output lines.
bool matches(const std::vector<std::string>& want, std::size_t i, const std::vector<std::string>& got, std::size_t j) {
    if (i == want.size()) return j == got.size();
    if (want[i] == "...") {
        for (std::size_t k = j; k <= got.size(); ++k)
            if (matches(want, i + 1, got, k)) return true;
        return false;
    }
    return j < got.size() && want[i] == got[j] && matches(want, i + 1, got, j + 1);
}

struct Example {
    std::string command;
    std::vector<std::string> expected;
};

std::vector<Example> readme_examples() {
    std::ifstream in(EISCONG_README);
    REQUIRE(in);
    std::vector<Example> out;
    bool inside = false;
    for (std::string line; std::getline(in, line);) {
        if (!inside) {
            inside = line == "```console";
            continue;
        }
        if (line == "```") {
            inside = false;
        } else if (line.rfind("$ ", 0) == 0) {
            out.push_back({line.substr(2), {}});
        } else {
            REQUIRE(!out.empty());
            out.back().expected.push_back(line);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("README console examples reproduce verbatim") {
    auto examples = readme_examples();
    CHECK(examples.size() >= 8);
    for (auto& ex : examples) {
        CAPTURE(ex.command);
        REQUIRE(ex.command.rfind("eiscong ", 0) == 0);
        auto r = run(ex.command.substr(8));
        auto got = lines_of(r.out);
        CHECK_MESSAGE(matches(ex.expected, 0, got, 0), r.out);
    }
}

TEST_CASE("exit codes") {
    CHECK(run("--help").status == 0);
    CHECK(run("basis --help").status == 0);
    CHECK(run("").status == 2);
    CHECK(run("bogus").status == 2);
    CHECK(run("basis").status == 2);
    CHECK(run("basis --level x").status == 2);
    CHECK(run("basis --level 10 --p 3").status == 2);
    CHECK(run("basis --level 30").status == 2);
    CHECK(run("qexp --level 234 --char 3.2.1").status == 2);
    CHECK(run("qexp --level 725 --char 5.4.2 --M 1 --L 29").status == 2);
    CHECK(run("qexp --level 725 --char 5.4.1 --M 2 --L 29").status == 2);
    CHECK(run("classify --level 725 --l 4").status == 2);
    auto missing = run("scan --level 18 --data-dir /nonexistent --cache-dir /nonexistent");
    CHECK(missing.status == 1);
    CHECK(missing.out.find("eiscong fetch --level 18") != std::string::npos);
    CHECK(run("fetch --level 11 --offline --cache-dir /nonexistent").status == 1);
}

TEST_CASE("JSON output round-trips") {
    for (const char* args : {"basis --level 725 --json", "qexp --level 121 --char 11.10.1 --prec 6 --json",
                             "beta --level 725 --char 5.4.1 --M 1 --L 29 --json", "order --level 121 --char 11.2.1 --json",
                             "classify --level 234 --l 7 --json", "scan --level 234 --json"}) {
        CAPTURE(args);
        auto r = run(args);
        REQUIRE(r.status == 0);
        ojson j = ojson::parse(r.out);
        CHECK(j.dump(2) + "\n" == r.out);
    }
}

TEST_CASE("scan JSON content") {
    auto j = json::parse(run("scan --level 725 --json").out);
    CHECK(j["level"] == 725);
    CHECK(j["p"] == 5);
    CHECK(j["bound"] == 150);
    CHECK(j["hits"].size() == 6);
    for (auto& h : j["hits"]) CHECK(h["report"]["prime"] == 7);
}

TEST_CASE("scan with explicit data files and bound") {
    auto r = run(std::string("scan --level 121 --bound 10 --data '") + EISCONG_TEST_DATA + "/newforms/newforms_121.json' --data-dir /nonexistent");
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("level 121, p = 11, bound 10\n", 0) == 0);
    CHECK(r.out.find("5 congruences in 2 Galois classes") != std::string::npos);
}

TEST_CASE("qexp default precision is the Sturm bound plus one") {
    auto j = json::parse(run("qexp --level 234 --char 3.2.1 --M 13 --L 2 --json").out);
    CHECK(j["precision"] == 85);
}
