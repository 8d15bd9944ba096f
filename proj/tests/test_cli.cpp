/*
   Copyright 2026 The kxcn authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <catch2/catch.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "kxcn/cn.hpp"
#include "kxcn/io.hpp"
#include "test_support.hpp"

using namespace kxcn;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "kxcn_cli_tests";
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = scratch_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd =
        std::string(KXCN_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, slurp(out), slurp(err)};
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

const std::string running_example_file = "matrix 3 3 over Q\n0 1 0\n0 0 0\n0 0 2\n";

}  // namespace

TEST_CASE("cn certificate on the running example", "[cli]") {
    const auto file = write_temp("running.matrix", running_example_file);
    const auto r = run_cli("cn " + file.string());
    REQUIRE(r.exit_code == 0);
    const json cert = json::parse(r.out);
    CHECK(cert["tool"] == "kxcn");
    CHECK(cert["analysis"] == "cn");
    CHECK(cert["results"]["index"] == 2);
    const json expected_drazin = json::array({json::array({"0", "0", "0"}), json::array({"0", "0", "0"}),
                                              json::array({"0", "0", "1/2"})});
    CHECK(cert["results"]["drazin"] == expected_drazin);
    for (const auto& check : cert["verification"]) {
        CHECK(check["pass"] == true);
    }

    SECTION("the emitted decomposition re-verifies against the re-parsed input") {
        const auto lines = significant_lines(running_example_file);
        const auto header = parse_matrix_header(lines[0]);
        const auto a = parse_matrix_body<Rational>({lines.begin() + 1, lines.end()}, header, Rational(0));
        Matrix<Rational> x = Matrix<Rational>::zeros(3, 3, Rational(0));
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                x(i, j) = parse_scalar_text(cert["results"]["drazin"][i][j].get<std::string>(), Rational(0));
            }
        }
        const auto checks = verify_drazin(a, x, cert["results"]["index"].get<std::size_t>());
        CHECK(checks.all());
    }
}

TEST_CASE("verify mode emits the raw report and exits 3 on failure", "[cli]") {
    const auto file = write_temp("j2.matrix", "matrix 2 2 over Q\n0 1\n0 0\n");
    const auto candidate = write_temp("identity.matrix", "matrix 2 2 over Q\n1 0\n0 1\n");
    const auto r = run_cli("verify " + file.string() + " " + candidate.string() + " --index 2");
    CHECK(r.exit_code == 3);
    const json cert = json::parse(r.out);
    // direct multiplication: I*A*I != I, commutation holds, A^3*I = 0 = A^2
    CHECK(cert["results"]["fixed_point"] == false);
    CHECK(cert["results"]["commutes"] == true);
    CHECK(cert["results"]["power_identity"] == true);

    const auto good = run_cli("verify " + file.string() + " " +
                              write_temp("zero.matrix", "matrix 2 2 over Q\n0 0\n0 0\n").string() + " --index 2");
    CHECK(good.exit_code == 0);
}

TEST_CASE("module analyze certificate", "[cli]") {
    const auto file = write_temp("free_xn.module", "module over Q\nfree 1\nx^3\n");
    const auto r = run_cli("module analyze " + file.string());
    REQUIRE(r.exit_code == 0);
    const json cert = json::parse(r.out);
    CHECK(cert["analysis"] == "module-analyze");
    CHECK(cert["results"]["surjective"] == false);
    CHECK(cert["results"]["splits"] == false);
    CHECK(cert["results"]["kernel"]["torsion"] == json::array({"1*x^3"}));
    CHECK(cert["results"]["localized"]["free_rank"] == 1);
    CHECK(cert["results"]["pointwise_cn"].is_null());
}

TEST_CASE("op check certificate and budget exhaustion", "[cli]") {
    const auto op = write_temp("even_odd.op", "operator even_odd over Q\n");
    const auto vectors = write_temp("even_odd.vec", "e<1>\n1*e<0> + 1*e<2>\n0\n");
    const auto r = run_cli("op check " + op.string() + " " + vectors.string() + " --budget 32");
    REQUIRE(r.exit_code == 0);
    const json cert = json::parse(r.out);
    const auto& rows = cert["results"]["vectors"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["kernel_membership"] == false);   // x has an odd coefficient
    CHECK(rows[0]["nilpotency_witness"].is_null()); // and never dies
    CHECK(rows[1]["kernel_membership"] == true);    // purely even polynomial
    CHECK(rows[0]["axioms"]["fixed_point"] == true);
    CHECK(rows[0]["axioms"]["commutes"] == true);

    SECTION("an indeterminate query exits 4") {
        const auto raise = write_temp("raise.op",
                                      "operator banded 1 over Q\n"
                                      "e<0> -> e<1>\n"
                                      "e<1> -> e<2>\n"
                                      "e<2> -> e<3>\n"
                                      "e<3> -> 0\n");
        const auto vec = write_temp("raise.vec", "e<0>\n");
        const auto rr = run_cli("op check " + raise.string() + " " + vec.string() + " --budget 2");
        CHECK(rr.exit_code == 4);
    }
}

TEST_CASE("parse errors exit 2 with a machine-readable reason", "[cli]") {
    const auto bad = write_temp("bad.matrix", "matrix 2 2 over Q\n1 2\n");
    const auto r = run_cli("cn " + bad.string());
    CHECK(r.exit_code == 2);
    const json err = json::parse(r.err);
    CHECK(err["error"] == true);
    CHECK(err["exit_code"] == 2);
    CHECK(err["reason"].is_string());

    const auto missing = run_cli("cn /nonexistent/path.matrix");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("field flag asserts the header field", "[cli]") {
    const auto file = write_temp("flag.matrix", "matrix 1 1 over Q\n2\n");
    CHECK(run_cli("--field Q cn " + file.string()).exit_code == 0);
    const auto conflict = run_cli("--field Fp:7 cn " + file.string());
    CHECK(conflict.exit_code == 2);
    const json err = json::parse(conflict.err);
    CHECK(err["reason"].get<std::string>().find("conflict") != std::string::npos);
}

TEST_CASE("certificates are byte-identical across runs", "[cli]") {
    const auto file = write_temp("det.matrix", running_example_file);
    const auto a = run_cli("cn " + file.string());
    const auto b = run_cli("cn " + file.string());
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("batch directories with --jobs", "[cli]") {
    const fs::path dir = scratch_dir() / "batch";
    fs::create_directories(dir);
    std::ofstream(dir / "a.matrix") << "matrix 1 1 over Q\n2\n";
    std::ofstream(dir / "b.matrix") << "matrix 2 2 over Q\n0 1\n0 0\n";
    std::ofstream(dir / "c.matrix") << "matrix 2 2 over Fp 7\n1 2\n3 4\n";
    const auto serial = run_cli("index " + dir.string());
    const auto parallel = run_cli("--jobs 3 index " + dir.string());
    REQUIRE(serial.exit_code == 0);
    CHECK(serial.out == parallel.out);
    const json combined = json::parse(serial.out);
    CHECK(combined["a.matrix"]["results"]["index"] == 0);
    CHECK(combined["b.matrix"]["results"]["index"] == 2);
}

TEST_CASE("output directory environment variable", "[cli]") {
    const fs::path outdir = scratch_dir() / "certs";
    fs::create_directories(outdir);
    const auto file = write_temp("envout.matrix", "matrix 1 1 over Q\n3\n");
    setenv("KXCN_OUT_DIR", outdir.string().c_str(), 1);
    const auto r = run_cli("drazin " + file.string());
    unsetenv("KXCN_OUT_DIR");
    REQUIRE(r.exit_code == 0);
    std::ifstream cert(outdir / "envout.cert.json");
    REQUIRE(cert.good());
    std::ostringstream ss;
    ss << cert.rdbuf();
    CHECK(ss.str() == r.out);
}
