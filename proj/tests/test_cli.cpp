#include <catch2/catch_amalgamated.hpp>

#include <cpn/serialize.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

// End-to-end runs of the installed command; CPN_CLI_PATH is injected by the
// build so the test finds the binary wherever it lands.

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    fs::path cap = fs::temp_directory_path() / "cpn_cli_capture.txt";
    std::string cmd = std::string(CPN_CLI_PATH) + " " + args + " > " + cap.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(cap);
    std::ostringstream text;
    text << in.rdbuf();
    r.output = text.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

} // namespace

TEST_CASE("export, verify, and re-export round trip") {
    fs::path dir = fs::temp_directory_path();
    fs::path a = dir / "cli_cp2_a.json", b = dir / "cli_cp2_b.json";

    CHECK(run("veronese --n 2 --out " + a.string()).exit_code == 0);
    CHECK(run("veronese --n 2 --out " + b.string()).exit_code == 0);
    CHECK(slurp(a) == slurp(b)); // deterministic bytes

    auto v = run("verify --in " + a.string());
    CHECK(v.exit_code == 0);
    CHECK(v.output.find("coherent-state-match") != std::string::npos);
    CHECK(v.output.find("PASS") != std::string::npos);

    // the exported file parses back to the ladder we started from
    std::ifstream in(a);
    auto seq = cpn::seq_from_json(nlohmann::json::parse(in));
    CHECK(seq.n == 2);
    CHECK(seq.projectors.size() == 3);
}

TEST_CASE("corrupted input fails verification with a named check") {
    fs::path dir = fs::temp_directory_path();
    fs::path good = dir / "cli_cp2_good.json", bad = dir / "cli_cp2_bad.json";
    REQUIRE(run("veronese --n 2 --out " + good.string()).exit_code == 0);

    auto j = nlohmann::json::parse(slurp(good));
    j["projectors"][1]["num"][0]["terms"][0]["re"] = j["projectors"][1]["num"][0]["terms"][0]["re"].get<double>() + 1e-3;
    std::ofstream(bad) << j.dump();

    auto v = run("verify --in " + bad.string() + " --format json");
    CHECK(v.exit_code == 1);
    auto rep = nlohmann::json::parse(v.output);
    CHECK(rep.at("status") == "fail");
    bool named_failure = false;
    for (const auto& ch : rep.at("checks"))
        if (ch.at("name") == "projector-shape" && ch.at("status") == "fail") named_failure = true;
    CHECK(named_failure);
}

TEST_CASE("usage and file errors exit with code 2") {
    fs::path garbage = fs::temp_directory_path() / "cli_garbage.json";
    std::ofstream(garbage) << "not json";
    CHECK(run("verify --in " + garbage.string()).exit_code == 2);
    CHECK(run("verify").exit_code == 2);              // no source given
    CHECK(run("coherent --spin 1 --m 1/2").exit_code == 2); // parity mismatch
    CHECK(run("veronese --n 20").exit_code == 2);     // out of range
    CHECK(run("nonsense-verb").exit_code == 2);
}

TEST_CASE("table verbs emit the documented layouts") {
    auto jac = run("jacobi --degree 1 --format csv");
    CHECK(jac.exit_code == 0);
    CHECK(jac.output == "power,coefficient\n0,0\n1,1\n");

    auto mat = run("matelem --spin 3/2 --theta 0.7 --format json");
    CHECK(mat.exit_code == 0);
    auto rep = nlohmann::json::parse(mat.output);
    CHECK(rep.at("schema_version") == cpn::schema_version);
    CHECK(rep.at("rows").size() == 4);
    CHECK(rep.at("rows")[0].at("k") == "3/2");
    double top = rep.at("rows")[0].at("entries")[0].at("re").get<double>();
    CHECK(top == Catch::Approx(std::pow(std::cos(0.35), 3)).margin(1e-12));

    auto ang = run("angles --n 2 --format json");
    CHECK(ang.exit_code == 0);
    auto arep = nlohmann::json::parse(ang.output);
    CHECK(arep.at("cos")[0][1].get<double>() == Catch::Approx(std::sqrt(3.0) / 2).margin(1e-9));
    CHECK(arep.at("quoted")[0][0].get<double>() == Catch::Approx(5.0 / std::sqrt(33.0)).margin(1e-12));
    CHECK(arep.at("notes").size() == 2);

    auto spc = run("spectral-check --n 1 --format csv");
    CHECK(spc.exit_code == 0);
    CHECK(spc.output.rfind("kind,k,re,im,value,status\n", 0) == 0);
    CHECK(spc.output.find("fail") == std::string::npos);
}

TEST_CASE("seed-field files grow into verified ladders") {
    fs::path dir = fs::temp_directory_path();
    fs::path coh = dir / "cli_coherent.json";
    REQUIRE(run("coherent --spin 3/2 --m 3/2 --out " + coh.string()).exit_code == 0);

    // the highest-weight coherent field is holomorphic, so it seeds a ladder
    auto v = run("verify --in " + coh.string() + " --format json");
    CHECK(v.exit_code == 0);
    auto rep = nlohmann::json::parse(v.output);
    CHECK(rep.at("n") == 3);
    CHECK(rep.at("status") == "pass");
    bool matched = false;
    for (const auto& ch : rep.at("checks"))
        if (ch.at("name") == "coherent-state-match" && ch.at("status") == "pass") matched = true;
    CHECK(matched);

    // lower weights are not holomorphic: reported as an input problem
    fs::path mid = dir / "cli_coherent_mid.json";
    REQUIRE(run("coherent --spin 3/2 --m 1/2 --out " + mid.string()).exit_code == 0);
    auto bad = run("verify --in " + mid.string());
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("holomorphic") != std::string::npos);
}
