#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kinetic_barrier/config.hpp"
#include "kinetic_barrier/report.hpp"

using namespace kb;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(KB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path write_small_config(const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path p = dir / "small.cfg";
    std::ofstream os(p);
    os << "d = 2\ngamma = 0.5\ns = 0.3\n"
          "r_max = 4\nn_per_axis = 24\n"
          "fixture = maxwellian_bump\ntheta_min = 0.3\n"
          "solver.t_end = 0.02\nsolver.theta_min = 0.4\n"
          "solver.theta_per_decade = 3\n"
          "quad.n_dirs = 16\nquad.shell_per_decade = 3\nquad.per_decade = 3\n"
          "seed = 0\n";
    return p;
}

}  // namespace

TEST_CASE("config parsing: keys, comments, defaults, errors") {
    const auto c = Config::from_string(
        "d = 2\n# comment line\ngamma = 0.5 # trailing\n\nbarrier.q = 5\n"
        "solver.snapshots = 0.1, 0.2, 0.5\n");
    CHECK(c.get_int("d", 0) == 2);
    CHECK(c.get_double("gamma", 0.0) == 0.5);
    CHECK(c.get_double("barrier.q", 0.0) == 5.0);
    CHECK(c.get_double("missing", 7.5) == 7.5);
    const auto snaps = c.get_list("solver.snapshots", {});
    REQUIRE(snaps.size() == 3);
    CHECK(snaps[1] == 0.2);

    CHECK_THROWS_AS(Config::from_string("not a key value line\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("gamma = abc\n").get_double("gamma", 0.0),
                    ConfigError);
    CHECK_THROWS_AS(Config::from_file("/definitely/missing.cfg"), ConfigError);
}

TEST_CASE("config builders produce validated objects") {
    const auto c = Config::from_string(
        "d = 2\ngamma = 0.5\ns = 0.3\nr_max = 4\nn_per_axis = 16\n"
        "barrier.form = q0_corrector\nbarrier.q = 6\nbarrier.q0 = 3\n"
        "barrier.schedule = inverse_power\nbarrier.beta = 2\nbarrier.n0 = 1.5\n"
        "barrier.eps0 = 0.01\nbarrier.eps_schedule = inverse_power\n"
        "barrier.eps_rate = 0.5\n");
    const auto p = c.kernel_params();
    CHECK(p.gamma == 0.5);
    const auto b = c.barrier();
    CHECK(b.form == BarrierForm::q0_corrector);
    CHECK(b.q == 6.0);
    CHECK(b.N.at(1.0) == Catch::Approx(1.5));
    CHECK(b.value(1.0, 2.0) ==
          Catch::Approx(1.5 * std::pow(2.0, -6.0) + 0.01 * std::pow(2.0, -3.0)));

    CHECK_THROWS_AS(Config::from_string("gamma = -5\n").kernel_params(), OutOfRange);
    CHECK_THROWS_AS(Config::from_string("barrier.form = nope\n").barrier(),
                    ConfigError);
}

TEST_CASE("cli: compute-cs writes the constant, bad config exits 2") {
    const fs::path dir = fs::temp_directory_path() / "kb_cli_cs";
    fs::remove_all(dir);
    const auto cfg = write_small_config(dir);
    CHECK(run_cli("compute-cs --config " + cfg.string() + " --output-dir " +
                  (dir / "out").string()) == 0);
    bool found = false;
    for (const auto& e : fs::directory_iterator(dir / "out")) {
        if (e.path().filename().string().starts_with("compute-cs") &&
            e.path().extension() == ".csv") {
            found = true;
            const auto body = slurp(e.path());
            CHECK(body.find("c_s") != std::string::npos);
        }
    }
    CHECK(found);
    CHECK(run_cli("compute-cs --config /missing/nope.cfg") == 2);
    CHECK(run_cli("unknown-subcommand") == 2);
}

TEST_CASE("cli: eval-operator and scan produce reports") {
    const fs::path dir = fs::temp_directory_path() / "kb_cli_eval";
    fs::remove_all(dir);
    const auto cfg = write_small_config(dir);
    CHECK(run_cli("eval-operator --config " + cfg.string() + " --v 1.0,0.5 " +
                  "--output-dir " + (dir / "out").string()) == 0);
    CHECK(run_cli("scan --config " + cfg.string() + " --barrier plain " +
                  "--output-dir " + (dir / "scan").string()) == 0);
    bool manifest = false;
    for (const auto& e : fs::directory_iterator(dir / "out"))
        if (e.path().filename().string().find("manifest") != std::string::npos)
            manifest = true;
    CHECK(manifest);
}

TEST_CASE("cli: verify emits per-proposition reports, deterministic bodies") {
    const fs::path dir = fs::temp_directory_path() / "kb_cli_verify";
    fs::remove_all(dir);
    const auto cfg = write_small_config(dir);
    CHECK(run_cli("verify --config " + cfg.string() + " --prop 3.6 --output-dir " +
                  (dir / "a").string()) == 0);
    CHECK(run_cli("verify --config " + cfg.string() + " --prop 3.6 --output-dir " +
                  (dir / "b").string()) == 0);
    std::string body_a, body_b;
    for (const auto& e : fs::directory_iterator(dir / "a"))
        if (e.path().filename().string().find("prop3.6") != std::string::npos)
            body_a = slurp(e.path());
    for (const auto& e : fs::directory_iterator(dir / "b"))
        if (e.path().filename().string().find("prop3.6") != std::string::npos)
            body_b = slurp(e.path());
    REQUIRE_FALSE(body_a.empty());
    CHECK(body_a == body_b);

    CHECK(run_cli("verify --config " + cfg.string() + " --prop 9.9") == 2);
}

TEST_CASE("csv formatting is locale-stable and round-trippable") {
    CHECK(fmt_double(0.5) == "0.5");
    CHECK(fmt_double(1e-17) == "1.0000000000000001e-17");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(fmt_double(x)) == x);
}
