#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end checks of the installed command-line surface: output text,
// exit codes, and byte-determinism of the emitted files.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CommandResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
    const std::string command = std::string(QGV_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 512> buffer;
    while (std::fgets(buffer.data(), int(buffer.size()), pipe) != nullptr)
        output += buffer.data();
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("gap prints nine-decimal spectral gaps") {
    CommandResult cnot = run_cli("gap --gate cnot");
    CHECK(cnot.exit_code == 0);
    CHECK(cnot.output == "0.555555556\n");

    CommandResult toffoli = run_cli("gap --gate toffoli");
    CHECK(toffoli.exit_code == 0);
    CHECK(toffoli.output == "0.166666667\n");
}

TEST_CASE("gap rejects unsupported gates with exit code 2") {
    CommandResult r = run_cli("gap --gate hadamard");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("hadamard") != std::string::npos);
}

TEST_CASE("plan prints the cnot budget table") {
    CommandResult r = run_cli("plan --gate cnot --epsilon 0.01 --delta 0.05");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("n_optimal      299") != std::string::npos);
    CHECK(r.output.find("n_local_tight  538") != std::string::npos);
    CHECK(r.output.find("n_local_loose  540") != std::string::npos);
}

TEST_CASE("plan for the toffoli loose budget") {
    CommandResult r = run_cli("plan --gate toffoli --epsilon 0.03 --delta 0.05");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("n_local_loose  600") != std::string::npos);
}

TEST_CASE("plan rejects out-of-range delta") {
    CHECK(run_cli("plan --gate cnot --epsilon 0.01 --delta 1.5").exit_code == 2);
    CHECK(run_cli("plan --gate cnot --epsilon 0 --delta 0.05").exit_code == 2);
}

TEST_CASE("unknown flags are rejected") {
    CHECK(run_cli("gap --gate cnot --frobnicate 1").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("verify accepts an ideal gate and reports the closed-form delta") {
    CommandResult r = run_cli(
        "verify --gate cnot --noise none --epsilon 0.01 --delta 0.05 "
        "--tests 500 --runs 1 --seed 7 --out cli_ideal");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("ACCEPTED") != std::string::npos);
    const std::string json = slurp("cli_ideal.json");
    CHECK(json.find("\"accepted\": true") != std::string::npos);
    // 0.9930556^500 = 0.0307
    CHECK(json.find("\"final_delta\": 0.0306") != std::string::npos);
}

TEST_CASE("verify rejects a heavily depolarized gate with exit code 1") {
    CommandResult r = run_cli(
        "verify --gate cnot --noise depolarizing:0.5 --epsilon 0.01 --delta 0.05 "
        "--tests 5000 --runs 1 --seed 7 --out cli_noisy");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("not accepted") != std::string::npos);
}

TEST_CASE("verify output files are byte-identical across reruns") {
    const std::string args =
        "verify --gate cnot --noise depolarizing:0.004 --epsilon 0.01 --delta 0.05 "
        "--tests 400 --runs 3 --seed 11 --out cli_det";
    const CommandResult first = run_cli(args);
    const std::string csv_first = slurp("cli_det.csv");
    const std::string json_first = slurp("cli_det.json");
    const CommandResult second = run_cli(args);
    CHECK(second.exit_code == first.exit_code);
    CHECK(second.output == first.output);
    CHECK(slurp("cli_det.csv") == csv_first);
    CHECK(slurp("cli_det.json") == json_first);
    CHECK(csv_first.rfind("N,pass_rate,delta_bound,epsilon_bound\n", 0) == 0);
}

TEST_CASE("verify honors stride and threshold flags") {
    CommandResult r = run_cli(
        "verify --gate cnot --noise none --epsilon 0.01 --delta 0.05 "
        "--tests 500 --runs 1 --seed 3 --stride 50 --out cli_stride");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp("cli_stride.csv");
    CHECK(csv.find("\n50,") != std::string::npos);
    CHECK(csv.find("\n500,") != std::string::npos);
    CHECK(csv.find("\n51,") == std::string::npos);

    // threshold acceptance can pass a gate the significance rule would not
    CommandResult t = run_cli(
        "verify --gate cnot --noise depolarizing:0.3 --epsilon 0.01 --delta 0.05 "
        "--tests 100 --runs 1 --seed 3 --threshold 0.5 --out cli_thresh");
    CHECK(t.exit_code == 0);
    CHECK(t.output.find("ACCEPTED") != std::string::npos);
}

TEST_CASE("verify validates its numeric flags") {
    CHECK(run_cli("verify --gate cnot --noise none --epsilon 0.01 --delta 0.05 "
                  "--tests 0 --runs 1 --seed 7").exit_code == 2);
    CHECK(run_cli("verify --gate cnot --noise depolarizing:2 --epsilon 0.01 --delta 0.05 "
                  "--tests 10 --runs 1 --seed 7").exit_code == 2);
}

TEST_CASE("fidelity prints the calibration values") {
    CommandResult dep = run_cli("fidelity --gate cnot --noise depolarizing:0.004");
    CHECK(dep.exit_code == 0);
    CHECK(dep.output.find("F_avg = 0.997000") != std::string::npos);

    CommandResult none = run_cli("fidelity --gate cnot --noise none");
    CHECK(none.output.find("F_avg = 1.000000") != std::string::npos);

    CommandResult tof = run_cli("fidelity --gate toffoli --noise depolarizing:0.0034286");
    CHECK(tof.output.find("eps_A = 0.003000") != std::string::npos);
}

TEST_CASE("solve-angles round trips and validates normalization") {
    CommandResult basis = run_cli("solve-angles --target 0,1 --convention a");
    CHECK(basis.exit_code == 0);
    CHECK(basis.output.find("forward fidelity = 1.000000") != std::string::npos);

    CommandResult diag = run_cli("solve-angles --target 0.7071,0.7071");
    CHECK(diag.exit_code == 0);
    CHECK(diag.output.find("forward fidelity = 1.000000") != std::string::npos);

    CHECK(run_cli("solve-angles --target 1,1").exit_code == 2);
}

TEST_CASE("dump-protocol emits the stable header") {
    CommandResult r = run_cli("dump-protocol --gate cnot");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("protocol cnot  d=4  states=12  settings=20\n", 0) == 0);
}
