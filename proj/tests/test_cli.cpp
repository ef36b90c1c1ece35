#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sltx/problem.hpp"
#include "support.hpp"

using namespace sltx;
using namespace sltx::testing;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string
slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult
run_cli(const std::string& args)
{
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path();
    const auto out = dir / ("sltx_cli_out_" + std::to_string(counter) + ".txt");
    const auto err = dir / ("sltx_cli_err_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string command =
        std::string(SLTX_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    std::filesystem::remove(out);
    std::filesystem::remove(err);
    return result;
}

std::filesystem::path
write_problem(const ProblemSpec& spec, const std::string& name)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << problem_to_json(spec);
    return path;
}

int
count_lines(const std::string& text)
{
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

} // namespace

TEST_CASE("validate reports the determinants and exits zero")
{
    const auto path = write_problem(b0_spec(), "cli_b0.json");
    const RunResult r = run_cli("validate " + path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"valid\":true") != std::string::npos);
    CHECK(r.out.find("\"theta\":1.0") != std::string::npos);
    CHECK(r.out.find("\"rho\":1.0") != std::string::npos);
}

TEST_CASE("validate rejects an invalid file with a machine-readable reason")
{
    ProblemSpec bad = b0_spec();
    bad.right_bc = {1.0, 0.0, 0.0, 1.0}; // rho = -1
    const auto path = write_problem(bad, "cli_bad_rho.json");
    const RunResult r = run_cli("validate " + path.string());
    CHECK(r.exit_code == 2);
    CHECK(r.out.empty());
    CHECK(count_lines(r.err) == 1);
    CHECK(r.err.find("\"code\":\"non_positive_determinant\"") != std::string::npos);
    CHECK(r.err.find("rho") != std::string::npos);
}

TEST_CASE("a missing problem file exits 2")
{
    const RunResult r = run_cli("validate /nonexistent/problem.json");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("\"code\":\"bad_input\"") != std::string::npos);
}

TEST_CASE("bad arguments exit 2 with a JSON error")
{
    const RunResult r = run_cli("spectrum");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("\"code\":\"bad_arguments\"") != std::string::npos);
}

TEST_CASE("spectrum emits the documented CSV and is byte-stable across runs")
{
    const auto path = write_problem(b0_spec(), "cli_b0.json");
    const RunResult a = run_cli("spectrum " + path.string() + " --count 1 --nodes 513");
    CHECK(a.exit_code == 0);
    CHECK(a.err.empty()); // no warnings from the missed-root guard
    CHECK(a.out.rfind("index,eigenvalue,delta_at_root,w_prime,c1,bracket_lo,bracket_hi\n", 0) == 0);
    CHECK(count_lines(a.out) == 2);
    CHECK(a.out.find("\n1,0.2899143955987") != std::string::npos);

    const RunResult b = run_cli("spectrum " + path.string() + " --count 1 --nodes 513");
    CHECK(a.out == b.out);
}

TEST_CASE("eigfun emits samples plus the scalar component line")
{
    const auto path = write_problem(b0_spec(), "cli_b0.json");
    const RunResult r = run_cli("eigfun " + path.string() + " --index 1 --samples 5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("x,segment,phi,dphi\n", 0) == 0);
    CHECK(count_lines(r.out) == 1 + 4 * 5 + 1);
    CHECK(r.out.find("\nscalar,") != std::string::npos);
}

TEST_CASE("expand emits one row per truncation level")
{
    const auto path = write_problem(b0_spec(), "cli_b0.json");
    const RunResult r = run_cli("expand " + path.string() + " --target poly:[1,0,-1]x4 --terms 3 --nodes 513");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("N,coefficient,residual\n", 0) == 0);
    CHECK(count_lines(r.out) == 4);
}

TEST_CASE("resolvent emits samples with a JSON footer and rejects eigenvalues")
{
    const auto path = write_problem(b0_spec(), "cli_b0.json");
    const RunResult r = run_cli("resolvent " + path.string() + " --eta -1 --rhs poly:[1]x4 --nodes 257");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("x,segment,y,dy\n", 0) == 0);
    const auto footer_pos = r.out.rfind("{\"");
    REQUIRE(footer_pos != std::string::npos);
    CHECK(r.out.find("\"residual\":", footer_pos) != std::string::npos);
    CHECK(r.out.find("\"d\":", footer_pos) != std::string::npos);

    const double mu1 = b0_s1() * b0_s1();
    std::ostringstream eta;
    eta.precision(17);
    eta << mu1;
    const RunResult bad = run_cli("resolvent " + path.string() + " --eta " + eta.str() + " --rhs poly:[1]x4 --nodes 257");
    CHECK(bad.exit_code == 4);
    CHECK(bad.err.find("\"code\":\"eta_is_eigenvalue\"") != std::string::npos);
}

TEST_CASE("compare reports small relative differences")
{
    const auto path = write_problem(b0_spec(), "cli_b0.json");
    const RunResult r = run_cli("compare " + path.string() + " --count 2 --mesh 400");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("index,shooting,oracle,rel_diff\n", 0) == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line); // header
    while (std::getline(lines, line)) {
        const auto last_comma = line.rfind(',');
        const double rel = std::stod(line.substr(last_comma + 1));
        CHECK(rel < 1e-3);
    }
}

TEST_CASE("json format wraps rows into an object")
{
    const auto path = write_problem(b0_spec(), "cli_b0.json");
    const RunResult r = run_cli("spectrum " + path.string() + " --count 1 --nodes 513 --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("{\"rows\":[{", 0) == 0);
    CHECK(r.out.find("\"eigenvalue\":0.2899") != std::string::npos);
}

TEST_CASE("output lands in a file when requested")
{
    const auto path = write_problem(b0_spec(), "cli_b0.json");
    const auto out_path = std::filesystem::temp_directory_path() / "cli_spectrum_out.csv";
    const RunResult r =
        run_cli("spectrum " + path.string() + " --count 1 --nodes 513 --output " + out_path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    const std::string contents = slurp(out_path);
    CHECK(contents.rfind("index,", 0) == 0);
    std::filesystem::remove(out_path);
}
