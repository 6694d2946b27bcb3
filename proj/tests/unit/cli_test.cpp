#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Runs the installed-style binary (path from the environment, wired up
// by the build) and captures everything it prints.
CommandResult run_cli(const std::string& args) {
    const char* binary = std::getenv("ADMMTUNE_CLI");
    REQUIRE_MESSAGE(binary != nullptr,
                    "ADMMTUNE_CLI must point at the command-line binary");
    static int counter = 0;
    const std::string capture = temp_path("admmtune_cli_capture_" +
                                          std::to_string(counter++) + ".txt");
    const std::string command =
        std::string(binary) + " " + args + " >" + capture + " 2>&1";
    const int status = std::system(command.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = slurp(capture);
    std::remove(capture.c_str());
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (begin <= line.size()) {
        const std::size_t end = line.find(',', begin);
        if (end == std::string::npos) {
            fields.push_back(line.substr(begin));
            break;
        }
        fields.push_back(line.substr(begin, end - begin));
        begin = end + 1;
    }
    return fields;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("tune prints the closed-form penalty and rates") {
    const auto result = run_cli("tune --m 1 --L 4");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("optimal penalty rho* = 2 ") != std::string::npos);
    CHECK(result.output.find("rate infimum as alpha -> 2: 0.333333333333") !=
          std::string::npos);
}

TEST_CASE("tune reports the finite-horizon relaxation when asked") {
    const auto result = run_cli("tune --m 1 --L 9 --t 2");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("alpha = 1.33333333333") != std::string::npos);
}

TEST_CASE("tune rejects invalid conditioning and missing flags") {
    CHECK(run_cli("tune --m -1 --L 4").exit_code == 1);
    CHECK(run_cli("tune --m 1").exit_code == 1);
    CHECK(run_cli("tune --m 1 --L 0.5").exit_code == 1);  // L < m
}

TEST_CASE("rate-sweep tabulates the closed-form rate") {
    const auto result = run_cli("rate-sweep --alpha 1.9 --rho0 1 --kappa 1,10,100");
    REQUIRE(result.exit_code == 0);
    const auto lines = lines_of(result.output);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] ==
          "problem,alpha,rho0,kappa,tau_theory,rate_empirical,bound_constant,wall_s");
    const double kappas[] = {1.0, 10.0, 100.0};
    for (int i = 0; i < 3; ++i) {
        const auto fields = fields_of(lines[static_cast<std::size_t>(i) + 1]);
        REQUIRE(fields.size() == 8);
        const double expected = 1.0 - 1.9 / (1.0 + std::sqrt(kappas[i]));
        CHECK(std::abs(std::stod(fields[4]) - expected) <= 1e-12);
        CHECK(fields[5] == "");
    }
}

TEST_CASE("simulated rate-sweep rows land on the theory column") {
    const auto result =
        run_cli("rate-sweep --alpha 1.9 --rho0 1 --kappa 1,10,100 --simulate");
    REQUIRE(result.exit_code == 0);
    int data_rows = 0;
    for (const auto& line : lines_of(result.output)) {
        if (line.rfind("attainability,", 0) != 0) continue;
        const auto fields = fields_of(line);
        REQUIRE(fields.size() == 8);
        REQUIRE(fields[5] != "");
        CHECK(std::abs(std::stod(fields[5]) - std::stod(fields[4])) <= 1e-3);
        ++data_rows;
    }
    CHECK(data_rows == 3);
}

TEST_CASE("rate-sweep rejects out-of-domain relaxations and empty grids") {
    const auto high = run_cli("rate-sweep --alpha 2.5 --rho0 1 --kappa 4");
    CHECK(high.exit_code == 1);
    CHECK(high.output.find("outside (0, 2)") != std::string::npos);

    CHECK(run_cli("rate-sweep --alpha \"\" --rho0 1 --kappa 4").exit_code == 1);
    CHECK(run_cli("rate-sweep --alpha 1 --rho0 1 --kappa 4 --problem logistic")
              .exit_code == 1);
}

TEST_CASE("rate-sweep honors config files with flag precedence") {
    const std::string config = temp_path("admmtune_sweep.cfg");
    {
        std::ofstream out(config);
        out << "alpha=1.9\nrho0=1\nkappa=4\n";
    }
    const auto result =
        run_cli("rate-sweep --config " + config + " --kappa 9");
    std::remove(config.c_str());
    REQUIRE(result.exit_code == 0);
    const auto lines = lines_of(result.output);
    REQUIRE(lines.size() == 2);
    const auto fields = fields_of(lines[1]);
    CHECK(fields[1] == "1.9");  // from the file
    CHECK(fields[3] == "9");    // command line wins over the file's 4
}

TEST_CASE("rate-sweep emits JSON when asked") {
    const auto result =
        run_cli("rate-sweep --alpha 1.9 --rho0 1 --kappa 4 --format json");
    REQUIRE(result.exit_code == 0);
    CHECK(result.output.find("\"tau_theory\"") != std::string::npos);
    CHECK(result.output.find("\"rate_empirical\": null") != std::string::npos);
}

TEST_CASE("certify passes on an instance that attains the rate") {
    const auto result = run_cli("certify --m 1 --L 10 --alpha 1 --rho0 1 --iters 300");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("PASS") != std::string::npos);
}

TEST_CASE("certify fails honestly when the rate is not attained") {
    const auto result =
        run_cli("certify --m 1 --L 10 --alpha 1 --rho0 0.5 --iters 300");
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("FAIL") != std::string::npos);
}

TEST_CASE("certify rejects relaxations outside the guaranteed interval") {
    const auto result = run_cli("certify --m 1 --L 10 --alpha 2.5 --rho0 1");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("outside (0, 2)") != std::string::npos);
}

TEST_CASE("classify-sweep writes bit-identical CSV for a fixed seed") {
    const std::string first = temp_path("admmtune_classify_a.csv");
    const std::string second = temp_path("admmtune_classify_b.csv");
    const std::string flags =
        "classify-sweep --n 60 --d 6 --alpha 1.0,1.4 --iters 200 --seed 3 --out ";
    const auto run_a = run_cli(flags + first);
    const auto run_b = run_cli(flags + second);
    REQUIRE(run_a.exit_code == 0);
    REQUIRE(run_b.exit_code == 0);
    CHECK(run_a.output.find("recommended alpha") != std::string::npos);

    const std::string csv_a = slurp(first);
    const std::string csv_b = slurp(second);
    std::remove(first.c_str());
    std::remove(second.c_str());
    REQUIRE(!csv_a.empty());
    CHECK(csv_a == csv_b);
    CHECK(lines_of(csv_a)[0] == "alpha,rate,log10_rate");
}

TEST_CASE("classify-sweep validates its dataset shape") {
    CHECK(run_cli("classify-sweep --n 4 --d 6 --iters 50").exit_code == 1);
}

}  // TEST_SUITE
