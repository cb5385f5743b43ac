#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "layered_elastica/cli.hpp"

namespace fs = std::filesystem;

namespace {

const char* kMedium = R"({\"lambda\":1.3,\"mu\":0.9,\"rho_plus\":1,\"rho_minus\":2.7,\"omega\":1.7})";

struct Run {
    int code;
    std::string out;
};

// runs the CLI binary; stderr is merged into the captured output unless dropped
Run run(const std::string& args, bool merge_stderr = true) {
    std::string cmd = std::string(LE_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch_dir() {
    fs::path d = fs::temp_directory_path() / ("le_cli_test_" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
}

int count_fields(const std::string& line) { return 1 + (int)std::count(line.begin(), line.end(), ','); }

}  // namespace

TEST_CASE("range and list parsing") {
    auto r = le::cli::parse_range("-1:1:5");
    REQUIRE(r.size() == 5);
    CHECK(r.front() == -1.0);
    CHECK(r[2] == 0.0);
    CHECK(r.back() == 1.0);
    CHECK(le::cli::parse_range("0.5").size() == 1);
    CHECK_THROWS(le::cli::parse_range("1:2:0"));
    CHECK_THROWS(le::cli::parse_range("a:b:3"));
    auto l = le::cli::parse_list("0.2, 0.5,-1");
    REQUIRE(l.size() == 3);
    CHECK(l[2] == -1.0);
}

TEST_CASE("atomic writes leave no temporary files") {
    fs::path d = scratch_dir() / "atomic";
    fs::create_directories(d);
    le::cli::write_atomic((d / "a.txt").string(), "first");
    le::cli::write_atomic((d / "a.txt").string(), "second");
    CHECK(slurp(d / "a.txt") == "second");
    int files = 0;
    for (auto& e : fs::directory_iterator(d)) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
    fs::remove_all(d);
}

TEST_CASE("eval grid shape and determinism") {
    fs::path d = scratch_dir();
    std::string base = std::string("eval --dim 2 --medium \"") + kMedium + "\" --y 0.2,0.5 --x1 -2:2:64 --x2 -1.5:1.5:64 --out ";
    Run a = run(base + (d / "a.csv").string());
    REQUIRE(a.code == 0);
    Run b = run(base + (d / "b.csv").string());
    REQUIRE(b.code == 0);
    std::string ca = slurp(d / "a.csv");
    CHECK(ca == slurp(d / "b.csv"));

    std::istringstream in(ca);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x1,x2,G11_re,G11_im,G12_re,G12_im,G21_re,G21_im,G22_re,G22_im");
    int rows = 0;
    bool shape = true;
    while (std::getline(in, line)) {
        ++rows;
        shape = shape && count_fields(line) == 10;
    }
    CHECK(rows == 4096);
    CHECK(shape);
    for (auto& e : fs::directory_iterator(d)) CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
    fs::remove_all(d);
}

TEST_CASE("eval in 3D") {
    Run r = run(std::string("eval --dim 3 --medium \"") + kMedium + "\" --y 0.1,0.2,0.5 --x1 0:1:2 --x2 0 --x3 -0.5");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(count_fields(line) == 21);
    std::getline(in, line);
    CHECK(count_fields(line) == 21);
}

TEST_CASE("farfield output") {
    Run r = run(std::string("farfield --dim 2 --medium \"") + kMedium + "\" --y 0.2,0.5 --wave s --column 2 --angles 0.5:1.5:3");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("theta,U_re,U_im\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
    Run g = run(std::string("farfield --dim 2 --medium \"") + kMedium + "\" --y 0.2,0.5 --wave p --column 1 --angles 0.0001");
    CHECK(g.code == 1);
}

TEST_CASE("verify stress identity") {
    Run r = run("verify --suite stress-identity --seed 7", false);
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["suite"] == "stress-identity");
    CHECK(j["pass"] == true);
    CHECK(j["seed"] == 7);
    CHECK(j["max_error"].get<double>() < 1e-13);
}

TEST_CASE("usage errors") {
    Run u = run(std::string("eval --medium \"") + kMedium + "\" --y 0.2,0.5 --bogus");
    CHECK(u.code == 1);
    CHECK(u.out.find("--bogus") != std::string::npos);
    CHECK(u.out.find("Usage") != std::string::npos);
    CHECK(run("").code == 1);
    CHECK(run("--help").code == 0);
    CHECK(run("verify --suite no-such-suite").code == 1);
    CHECK(run(std::string("solve --medium \"") + kMedium + "\" --source 0.3,1,1,0,0,0").code == 1);
    CHECK(run("eval --medium /nonexistent/medium.json --y 0.2,0.5").code == 1);
    CHECK(run(R"(eval --medium "{\"lambda\":1.3,\"mu\":-1,\"rho_plus\":1,\"rho_minus\":1,\"omega\":1}" --y 0.2,0.5)").code == 1);
}

TEST_CASE("solve writes field and header") {
    fs::path d = scratch_dir();
    std::string out = (d / "sol").string();
    Run r = run(std::string("solve --medium \"") + kMedium +
                R"(" --profile "{\"type\":\"bump\",\"height\":0.2,\"half_width\":0.8}" --source 0.3,1,1,0,0.3,0.2 --R 3 --nodes 64 --ppw 6 --grid -2:2:5 --out )" +
                out);
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(slurp(out + ".json"));
    CHECK(j["R"] == 3.0);
    CHECK(j["boundary_nodes"] == 64);
    CHECK(j["transmission"]["displacement_jump"].get<double>() < 1e-12);
    std::string csv = slurp(out + ".csv");
    CHECK(csv.rfind("x1,x2,side,u1_re,u1_im,u2_re,u2_im", 0) == 0);
    fs::remove_all(d);
}
