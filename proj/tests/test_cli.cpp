#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(CUSPKIT_BIN) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const char* name) { return std::string(CUSPKIT_DATA) + "/" + name; }

} // namespace

TEST_CASE("solve") {
    auto r = run("solve " + data("fig8.tri") + " --format json");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j.at("volume").get<double>() - 2.029883212819) < 1e-9);
    CHECK(j.at("geometric").get<bool>());
    CHECK(run("solve " + data("fig8.tri")).code == 0);
}

TEST_CASE("usage and parse errors exit with 1") {
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("solve " + data("empty.tri")).code == 1);
    CHECK(run("solve /nonexistent/x.tri").code == 1);
    CHECK(run("slope " + data("fig8.tri") + " 0 0").code == 1);
    CHECK(run("solve " + data("fig8.tri") + " --format xml").code == 1);
    CHECK(run("twist " + data("twistfamily.tri") + " --range 9..5").code == 1);
    CHECK(run("surface " + data("p333.tri") + " " + data("missing.json")).code == 1);
    CHECK(run("horoballs " + data("fig8.tri") + " --cusp 3").code == 1);
}

TEST_CASE("slope") {
    auto r = run("slope " + data("p333.hol") + " 0 1 --format json");
    REQUIRE(r.code == 0);
    CHECK(std::abs(std::stod(nlohmann::json::parse(r.out).at("length").dump()) - 6.0) < 1e-6);
}

TEST_CASE("horoballs with symmetry and svg") {
    auto svg = std::filesystem::temp_directory_path() / "cuspkit_cli_test.svg";
    auto r = run("horoballs " + data("p333.tri") + " --symmetry 6 --svg " + svg.string() + " --format json");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("full_sized").get<int>() >= 6);
    std::ifstream in(svg);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("<svg") != std::string::npos);
    std::filesystem::remove(svg);
    auto empty = nlohmann::json::parse(run("horoballs " + data("fig8.tri") + " --cutoff 1.5 --format json").out);
    CHECK(empty.at("balls").empty());
}

TEST_CASE("surface reports") {
    CHECK(run("surface --synthetic").code == 0);
    auto r = run("surface " + data("p333.tri") + " " + data("p333_seifert.json") + " --format json");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("verdict") == "embedded");
    CHECK(j.at("all_pass").get<bool>());
}

TEST_CASE("output is deterministic and can go to a file") {
    std::string args = "width " + data("whitehead.tri") + " --balance --format json";
    auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto file = std::filesystem::temp_directory_path() / "cuspkit_cli_test.json";
    CHECK(run(args + " -o " + file.string()).code == 0);
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == a.out);
    std::filesystem::remove(file);
}
