#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "test_helpers.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Run a raw shell command with stderr silenced; stdout and the exit status
// come back.
RunResult run_cmd(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

RunResult run_cli(const std::string& args) {
    return run_cmd(std::string(SPECGAP_CLI_PATH) + " " + args);
}

json parse_single_json(const std::string& text) {
    return json::parse(text);
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

// Drops timestamps from jsonl rows (reserialized without the key) and from
// pretty-printed objects (the member sits alone on its line, so the line
// goes away).
std::string strip_timestamps(const std::string& text) {
    std::string out;
    for (const std::string& line : lines_of(text)) {
        if (line.find("\"timestamp\"") == std::string::npos) {
            out += line;
            out += '\n';
            continue;
        }
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;
        j.erase("timestamp");
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace

TEST_CASE("gap command on pinned operators") {
    const RunResult flat = run_cli("gap --graph path --n 10 --potential flat");
    REQUIRE(flat.exit_code == 0);
    const json j = parse_single_json(flat.out);
    CHECK(j.at("gap").get<double>() ==
          Catch::Approx(testutil::flat_path_bound(10)).margin(1e-12));
    CHECK(std::fabs(j.at("margin").get<double>()) <= 1e-10);
    CHECK(j.at("graph") == "path");
    CHECK(j.at("N") == 10);

    const RunResult cube = run_cli("gap --graph hypercube --n 6 --potential flat");
    REQUIRE(cube.exit_code == 0);
    CHECK(parse_single_json(cube.out).at("gap").get<double>() ==
          Catch::Approx(2.0).margin(1e-10));

    const RunResult lin = run_cli(
        R"(gap --graph hypercube --n 5 --potential '{"generator":"unit-linear","params":{"alpha":3.0}}')");
    REQUIRE(lin.exit_code == 0);
    CHECK(parse_single_json(lin.out).at("gap").get<double>() ==
          Catch::Approx(std::sqrt(13.0)).margin(1e-10));
}

TEST_CASE("gap command csv format") {
    const RunResult r = run_cli("gap --graph path --n 8 --potential quadratic --format csv");
    REQUIRE(r.exit_code == 0);
    const std::vector<std::string> ls = lines_of(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "N,alpha_or_seed,lambda1,lambda2,gap,bound,margin,node_x,m,n,status");
    CHECK(ls[1].rfind("8,", 0) == 0);
    CHECK(ls[1].find(",ok") != std::string::npos);
}

TEST_CASE("gap command rejects bad requests") {
    CHECK(run_cli("gap --graph path --n 10 --potential nonsense").exit_code == 2);
    CHECK(run_cli("gap --graph triangle --n 10 --potential flat").exit_code == 2);
    CHECK(run_cli("gap --graph path --potential flat").exit_code == 2);   // no size anywhere
    CHECK(run_cli(R"(gap --graph path --n 3 --potential '{"values":[0,1]}')").exit_code == 2);
    CHECK(run_cli(
              R"(gap --graph path --n 3 --require-convex --potential '{"values":[0,1,0.5]}')")
              .exit_code == 2);
    // a concave dome splits the ground level into two wells; the gap falls
    // under the flat bound and the exit status reports it
    const RunResult dome = run_cli(
        R"(gap --graph path --n 6 --potential '{"values":[0,5,8,8,5,0]}')");
    CHECK(dome.exit_code == 1);
    CHECK(parse_single_json(dome.out).at("margin").get<double>() < 0.0);
}

TEST_CASE("gap command reads config files and flags win") {
    const std::string cfg_path = "/tmp/specgap_test_gap_cfg.json";
    {
        std::ofstream f(cfg_path);
        f << R"({"graph":"hypercube","n":4,"potential":"unit-linear","alpha":2.0})";
    }
    const RunResult base = run_cli("gap --config " + cfg_path);
    REQUIRE(base.exit_code == 0);
    CHECK(parse_single_json(base.out).at("gap").get<double>() ==
          Catch::Approx(std::sqrt(8.0)).margin(1e-10));

    const RunResult overridden = run_cli("gap --config " + cfg_path + " --alpha 3.0");
    REQUIRE(overridden.exit_code == 0);
    CHECK(parse_single_json(overridden.out).at("gap").get<double>() ==
          Catch::Approx(std::sqrt(13.0)).margin(1e-10));
    std::remove(cfg_path.c_str());
}

TEST_CASE("sweep command covers a grid deterministically") {
    const std::string args =
        "sweep --graph path --family bound --n-range 4:8 --seeds 0:4 --scale 1.0";
    const RunResult a = run_cli(args + " --jobs 1");
    const RunResult b = run_cli(args + " --jobs 3");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.out == b.out);

    const std::vector<std::string> ls = lines_of(a.out);
    REQUIRE(ls.size() == 26);   // header + 5 sizes x 5 seeds
    for (std::size_t i = 1; i < ls.size(); ++i)
        CHECK(ls[i].find(",ok") != std::string::npos);
}

TEST_CASE("sweep families run clean on convex grids") {
    for (const char* fam : {"bound", "node", "casoratian", "hf", "interlacing", "ordering"}) {
        const RunResult r = run_cli(std::string("sweep --graph path --family ") + fam +
                                    " --n-range 5:7 --alpha-range 0:2:3");
        INFO(fam);
        CHECK(r.exit_code == 0);
    }
    const RunResult exact =
        run_cli("sweep --graph hypercube --family exact --n-range 2:6 --alpha-range 0:3:4");
    CHECK(exact.exit_code == 0);
    CHECK(run_cli("sweep --graph path --family exact --n-range 4:5 --alpha-range 0:1:2")
              .exit_code == 2);
}

TEST_CASE("sweep flags violations and sets the exit status") {
    const RunResult r = run_cli(
        R"(sweep --graph path --family bound --n-range 6:6 --alpha-range 0:0:1 --potential '{"values":[0,5,8,8,5,0]}')");
    CHECK(r.exit_code == 1);
    const std::vector<std::string> ls = lines_of(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[1].find("violation") != std::string::npos);
}

TEST_CASE("sweep json format emits one object per row") {
    const RunResult r = run_cli(
        "sweep --graph hypercube --family bound --n-range 3:4 --alpha-range 0:1:2 --format json");
    REQUIRE(r.exit_code == 0);
    const std::vector<std::string> ls = lines_of(r.out);
    REQUIRE(ls.size() == 4);
    for (const std::string& line : ls) {
        const json row = json::parse(line);
        CHECK(row.at("status") == "ok");
        CHECK(row.at("margin").get<double>() >= -1e-9);
    }
}

TEST_CASE("flow command converges and writes a trace") {
    const std::string trace_path = "/tmp/specgap_test_flow_trace.jsonl";
    const RunResult r = run_cli(
        "flow --graph path --n 10 --potential quadratic --dalpha 0.01 --max-steps 5000"
        " --lin-tol 1e-6 --output " +
        trace_path);
    REQUIRE(r.exit_code == 0);
    const json summary = parse_single_json(r.out);
    CHECK(summary.at("terminated_reason") == "converged_to_linear");
    CHECK(summary.at("steps").get<int>() > 10);
    CHECK(summary.at("final_gap").get<double>() >= testutil::flat_path_bound(10) - 1e-9);

    std::ifstream f(trace_path);
    REQUIRE(f.good());
    std::stringstream buf;
    buf << f.rdbuf();
    const std::vector<std::string> ls = lines_of(buf.str());
    REQUIRE(ls.size() == static_cast<std::size_t>(summary.at("steps").get<int>()) + 2);
    CHECK(json::parse(ls.back()).at("terminated_reason") == "converged_to_linear");
    const json first = json::parse(ls.front());
    CHECK(first.at("gap").get<double>() >= summary.at("final_gap").get<double>() - 1e-10);
    std::remove(trace_path.c_str());
}

TEST_CASE("flow command exit codes by termination") {
    CHECK(run_cli("flow --graph path --n 8 --potential unit-linear --alpha 1.0").exit_code == 0);
    CHECK(run_cli("flow --graph path --n 10 --potential quadratic --max-steps 1").exit_code == 2);
    const RunResult bad = run_cli(
        R"(flow --graph path --n 4 --require-convex --potential '{"values":[0,1,0,1]}')");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("seed base environment variable offsets random draws") {
    const std::string invoke = std::string(SPECGAP_CLI_PATH) +
                               " gap --graph path --n 9 --potential random-convex --seeds 3:3";
    const RunResult plain = run_cmd(invoke);
    const RunResult zero = run_cmd("SPECGAP_SEED_BASE=0 " + invoke);
    const RunResult seven = run_cmd("SPECGAP_SEED_BASE=7 " + invoke);
    REQUIRE(plain.exit_code == 0);
    REQUIRE(zero.exit_code == 0);
    REQUIRE(seven.exit_code == 0);
    CHECK(strip_timestamps(plain.out) == strip_timestamps(zero.out));
    CHECK(strip_timestamps(plain.out) != strip_timestamps(seven.out));

    CHECK(run_cmd("SPECGAP_SEED_BASE=notanumber " + invoke).exit_code == 2);
}

TEST_CASE("verify --quick passes every check") {
    const RunResult r = run_cli("verify --quick");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("checks pass") != std::string::npos);
}

TEST_CASE("verify --adversarial fails only the convexity-dependent bounds") {
    const RunResult r = run_cli("verify --quick --adversarial");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
    // structure that does not need convexity keeps passing
    CHECK(r.out.find("solver-oracle-agreement") != std::string::npos);
}
