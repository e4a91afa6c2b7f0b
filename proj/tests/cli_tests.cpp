#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef STEPANOV_CLI_PATH
#error "STEPANOV_CLI_PATH must point at the built command-line binary"
#endif

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(STEPANOV_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_file(const std::string& stem, const std::string& content) {
    std::string path = std::string("/tmp/") + stem;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path;
}

} // namespace

TEST_CASE("checks on a well-behaved entry exits 0 and reports residuals") {
    CliResult r = run_cli("checks --zoo cp2-fs --points 3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("div_T") != std::string::npos);
    CHECK(r.output.find("result: PASS") != std::string::npos);
}

TEST_CASE("checks fails with exit 1 when the structure axioms do not hold") {
    CliResult r = run_cli("checks --zoo s4-like-nonkahler --points 3");
    CHECK(r.exit_code == 1);
}

TEST_CASE("classify emits the membership table and exits 0") {
    CliResult r = run_cli("classify --zoo kahler-nonEinstein --points 3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Omega") != std::string::npos);
}

TEST_CASE("json output is valid-looking, versioned and deterministic") {
    CliResult a = run_cli("classify --zoo cp2-fs --points 3 --seed 42 --format json");
    CliResult b = run_cli("classify --zoo cp2-fs --points 3 --seed 42 --format json");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("\"schema_version\": 1") != std::string::npos);
    CHECK(a.output.find("\"tool\"") != std::string::npos);
}

TEST_CASE("broken manifests exit 2") {
    std::string bad = temp_file("cli_bad_manifest.json", "{ \"name\": \"x\" }");
    CliResult r = run_cli("checks --manifest " + bad);
    CHECK(r.exit_code == 2);
    CliResult r2 = run_cli("checks --zoo no-such-entry");
    CHECK(r2.exit_code == 2);
}

TEST_CASE("theorem verification refuses non-Kahler input with exit 3") {
    CliResult r = run_cli("verify --theorem 2 --zoo flrw-dust --points 3");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("refusal") != std::string::npos);
}

TEST_CASE("theorem runs succeed on their intended inputs") {
    CliResult t1 = run_cli("verify --theorem 1 --trials 10 --dim 4");
    CHECK(t1.exit_code == 0);
    CliResult t2 = run_cli("verify --theorem 2 --zoo cp2-fs --points 3");
    CHECK(t2.exit_code == 0);
    CliResult t3 = run_cli("verify --theorem 3 --trials 10 --dim 4");
    CHECK(t3.exit_code == 0);
}

TEST_CASE("zoo list and export round-trip") {
    CliResult ls = run_cli("zoo list");
    CHECK(ls.exit_code == 0);
    CHECK(ls.output.find("cp2-fs") != std::string::npos);
    CHECK(ls.output.find("flrw-dust") != std::string::npos);

    CliResult exp = run_cli("zoo export cp1-fs");
    CHECK(exp.exit_code == 0);
    std::string path = temp_file("cli_export_roundtrip.json", exp.output);
    CliResult again = run_cli("classify --manifest " + path + " --points 2");
    CHECK(again.exit_code == 0);

    CliResult missing = run_cli("zoo export nope");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("--out writes the same bytes as stdout") {
    CliResult direct = run_cli("classify --zoo cp1-fs --points 2 --format json");
    std::string path = "/tmp/cli_out_report.json";
    CliResult filed = run_cli("classify --zoo cp1-fs --points 2 --format json --out " + path);
    CHECK(filed.exit_code == 0);
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == direct.output);
}

TEST_CASE("classify reports match the committed golden files byte for byte") {
    for (const char* name : {"cp2-fs", "kahler-nonEinstein", "flrw-dust"}) {
        CliResult r = run_cli(std::string("classify --zoo ") + name +
                              " --points 5 --seed 42 --format json");
        REQUIRE(r.exit_code == 0);
        std::ifstream f(std::string(STEPANOV_GOLDEN_DIR) + "/classify-" + name + ".json",
                        std::ios::binary);
        REQUIRE(f.good());
        std::stringstream ss;
        ss << f.rdbuf();
        INFO("golden entry ", name);
        CHECK(r.output == ss.str());
    }
}

TEST_CASE("usage errors are caught by the argument parser") {
    CliResult r = run_cli("verify --trials 5");
    CHECK(r.exit_code != 0); // --theorem is required
    CliResult r2 = run_cli("classify --zoo cp1-fs --format yaml");
    CHECK(r2.exit_code != 0);
}
