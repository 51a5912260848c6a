#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "confstrata/cli.hpp"
#include "confstrata/errors.hpp"
#include "confstrata/io.hpp"

using namespace confstrata;
using namespace confstrata::cli;

namespace {

const std::string kData = CONFSTRATA_DATA_DIR;

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "confstrata");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    auto parsed = parse_args(static_cast<int>(argv.size()), argv.data(), out, err);
    if (!parsed.config) return {parsed.exit_code, out.str(), err.str()};
    const int code = run(*parsed.config, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/confstrata_test_" + name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("forests --n 3 --count prints 8") {
    const auto r = invoke({"forests", "--n", "3", "--count"});
    CHECK(r.code == 0);
    CHECK(r.out == "8\n");
}

TEST_CASE("purity verdicts and refusals") {
    auto r = invoke({"purity", "--variety", kData + "/elliptic.json", "--n", "2", "--max-deg", "6", "--format", "json"});
    CHECK(r.code == 0);
    const auto report = io::parse_json(r.out);
    CHECK(report["schema"] == kSchema);
    CHECK(report["result"]["verdict"] == "pure");
    CHECK(report["input_digest"].get<std::string>().rfind("sha256:", 0) == 0);

    r = invoke({"purity", "--variety", kData + "/corrupted.json", "--n", "2", "--max-deg", "6", "--format", "json"});
    CHECK(r.code == 2);
    const auto refusal = io::parse_json(r.out);
    CHECK(refusal["result"]["refused"] == true);
    CHECK(refusal["result"]["reason"].get<std::string>().find("H^1") != std::string::npos);
}

TEST_CASE("malformed input gives line and field diagnostics") {
    const auto bad = temp_file("bad.json", "{\n  \"generators\": 2,\n  \"relations\": [[1, 0, 0, 0]\n  [0, 0, 0, 1]]\n}\n");
    auto r = invoke({"koszul", "--presentation", bad});
    CHECK(r.code == 1);
    CHECK(r.err.find("bad.json:4:") != std::string::npos);

    const auto short_rel = temp_file("short.json", R"({"generators": 2, "relations": [[1, 0, 0]]})");
    r = invoke({"koszul", "--presentation", short_rel});
    CHECK(r.code == 1);
    CHECK(r.err.find("relations[0]") != std::string::npos);

    const auto bad_var = temp_file("var.json", R"({"name": "x", "d": 1, "diagonal_class_vanishes": true, "cohomology": {"0": [{"weight": 0}]}})");
    r = invoke({"hilbert", "--variety", bad_var, "--n", "2"});
    CHECK(r.code == 1);
    CHECK(r.err.find("cohomology.0[0].mult") != std::string::npos);

    r = invoke({"koszul", "--presentation", "/nonexistent.json"});
    CHECK(r.code == 1);
}

TEST_CASE("caps and overrides") {
    CHECK(invoke({"forests", "--n", "7", "--count"}).code == 1);
    const auto r = invoke({"forests", "--n", "7", "--count", "--unsafe-no-cap"});
    CHECK(r.code == 0);
    CHECK(r.out == "78416\n");
    CHECK(invoke({"hilbert", "--variety", kData + "/affine_line.json", "--n", "2", "--max-deg", "41"}).code == 1);
    RunConfig c;
    c.n = 9;
    CHECK_THROWS_AS(check_caps(c), CapExceeded);
    c.unsafe_no_cap = true;
    CHECK_NOTHROW(check_caps(c));
}

TEST_CASE("reports are deterministic and timestamps go to the sidecar") {
    const std::string log = "/tmp/confstrata_test.log";
    std::remove(log.c_str());
    const std::vector<std::string> args = {"hilbert", "--variety", kData + "/elliptic.json", "--n", "2", "--format", "json", "--log", log};
    const auto a = invoke(args);
    const auto b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    std::ifstream in(log);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        CHECK(line.find('T') == 10);
        ++lines;
    }
    CHECK(lines == 4);
}

TEST_CASE("the digest tracks input content") {
    const auto p = temp_file("sym.json", R"({"generators": 2, "convention": "free", "relations": [[0, 1, -1, 0]]})");
    const auto q = temp_file("sym2.json", R"({"generators": 2, "convention": "free", "relations": [[0, 2, -2, 0]]})");
    const auto a = io::parse_json(invoke({"koszul", "--presentation", p, "--format", "json"}).out);
    const auto b = io::parse_json(invoke({"koszul", "--presentation", q, "--format", "json"}).out);
    CHECK(a["input_digest"] != b["input_digest"]);
    CHECK(a["result"]["pass"] == true);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("every subcommand runs on the shipped data") {
    CHECK(invoke({"nests", "--n", "4", "--count"}).out == "52\n");
    auto r = invoke({"strata", "--n", "3", "--format", "dot"});
    CHECK(r.code == 0);
    CHECK(r.out.find("digraph") == 0);
    r = invoke({"deltafin-check", "--max-level", "2", "--max-size", "2"});
    CHECK(r.out.find("PASS") != std::string::npos);
    r = invoke({"con", "--check-functor", "--max-level", "2", "--max-size", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    r = invoke({"con", "--input", kData + "/chain.json", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(io::parse_json(r.out)["result"]["object"]["codim"] == 1);
    r = invoke({"blowup-validate", "--building", kData + "/full_diagonal_3.json", "--format", "json"});
    CHECK(io::parse_json(r.out)["result"]["failing_prefix"] == 3);
    r = invoke({"blowup-validate", "--n", "4", "--format", "json"});
    CHECK(io::parse_json(r.out)["result"]["valid"] == true);
    r = invoke({"forget-centers", "--map", kData + "/inclusion.json", "--format", "json"});
    CHECK(io::parse_json(r.out)["result"]["centers"].size() == 4);
    r = invoke({"hilbert", "--variety", kData + "/affine_line.json", "--n", "3"});
    CHECK(r.out == "1 + 3t^2 + 2t^4\n");
    r = invoke({"koszul", "--presentation", kData + "/not_koszul.json"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL: coefficient of t^4") == 0);
    r = invoke({"forests", "--forest", kData + "/forest.json", "--dot", "/tmp/confstrata_test_forest.dot"});
    CHECK(r.code == 0);
    std::ifstream dot("/tmp/confstrata_test_forest.dot");
    CHECK(dot.good());
    CHECK(invoke({"forget-centers"}).code == 1);
    CHECK(invoke({"bogus"}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("every selftest passes") {
    for (const char* cmd : {"forests", "nests", "strata", "deltafin-check", "con", "blowup-validate", "forget-centers",
                            "purity", "hilbert", "koszul"}) {
        const auto r = invoke({cmd, "--selftest"});
        INFO(cmd << ": " << r.out);
        CHECK(r.code == 0);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }
}

TEST_CASE("JSON round trips") {
    auto phi = io::forest_from_json(io::parse_json(io::read_file(kData + "/forest.json")));
    CHECK(io::forest_from_json(io::forest_to_json(phi)) == phi);
    auto chain = io::chain_from_json(io::parse_json(io::read_file(kData + "/chain.json")));
    CHECK(setcat::validate_chain(chain).ok);
    CHECK(io::chain_from_json(io::chain_to_json(chain)) == chain);
    auto p = io::quadratic_from_json(io::parse_json(io::read_file(kData + "/genus1.json")));
    const auto again = io::quadratic_from_json(io::quadratic_to_json(p));
    CHECK(again.relations == p.relations);
    CHECK(again.convention == p.convention);
    const auto x = io::variety_from_json(io::parse_json(io::read_file(kData + "/elliptic.json")));
    CHECK(x.products.size() == 1);
    CHECK(io::space_to_json(x.cohomology)["1"][0]["mult"] == 2);
    CHECK_THROWS_AS(io::parse_json("{\"a\": }", "x"), InputError);
}
