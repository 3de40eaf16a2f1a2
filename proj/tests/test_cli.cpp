#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "flni/estimators.hpp"
#include "flni/io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "flni_cli_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path p = work_dir() / name;
    std::ofstream f(p);
    f << content;
    return p;
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path out = work_dir() / ("stdout" + std::to_string(counter) + ".txt");
    const fs::path err = work_dir() / ("stderr" + std::to_string(counter) + ".txt");
    ++counter;
    std::string cmd = env_prefix;
    if (!cmd.empty()) cmd += ' ';
    cmd += '"' + test_util::locate_cli() + "\" " + args + " > " + out.string() + " 2> " +
           err.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = (status == -1) ? -1 : WEXITSTATUS(status);
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("cli fit basics") {
    const fs::path y = write_temp("dec.csv", "5\n4\n3\n2\n1\n");

    SUBCASE("strong nearly-isotonic penalty pools to the mean") {
        const auto r = run_cli("fit --input " + y.string() +
                               " --graph chain:5 --lambda-ni 1000");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        for (double b : j["beta"].get<std::vector<double>>()) {
            CHECK(b == doctest::Approx(3.0).epsilon(1e-8));
        }
        CHECK(j["df"].get<int>() == 1);
        CHECK(j["converged"].get<bool>());
    }

    SUBCASE("zero penalties echo the input and round-trip bit-exactly") {
        const auto r = run_cli("fit --input " + y.string() + " --graph chain:5");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        const auto beta = j["beta"].get<std::vector<double>>();
        CHECK(beta == std::vector<double>{5, 4, 3, 2, 1});

        const auto lib = flni::fit_flni({5, 4, 3, 2, 1}, flni::build_chain_graph(5), {});
        CHECK(beta == lib.beta);
        CHECK(j["objective"].get<double>() == lib.objective);
        CHECK(j["gap"].get<double>() == lib.dual.gap);
    }

    SUBCASE("wrong-length input exits 3") {
        const auto r = run_cli("fit --input " + y.string() + " --graph chain:4");
        CHECK(r.exit_code == 3);
        CHECK(r.out.empty());
    }

    SUBCASE("--output writes the same bytes as stdout") {
        const fs::path out = work_dir() / "fit_out.json";
        const std::string args =
            "fit --input " + y.string() + " --graph chain:5 --lambda-f 0.3 --lambda-l 0.1";
        const auto to_stdout = run_cli(args);
        const auto to_file = run_cli(args + " --output " + out.string());
        REQUIRE(to_stdout.exit_code == 0);
        REQUIRE(to_file.exit_code == 0);
        CHECK(to_file.out.empty());
        std::ifstream f(out);
        std::ostringstream ss;
        ss << f.rdbuf();
        CHECK(ss.str() == to_stdout.out);
    }

    SUBCASE("unparsable input exits 2") {
        const fs::path bad = write_temp("bad.csv", "1\nnot-a-number\n");
        CHECK(run_cli("fit --input " + bad.string() + " --graph chain:2").exit_code == 2);
        CHECK(run_cli("fit --input /nonexistent.csv --graph chain:2").exit_code == 2);
        CHECK(run_cli("fit --input " + y.string() + " --graph ring:5").exit_code == 2);
    }
}

TEST_CASE("cli cyclic graph handling") {
    const fs::path y = write_temp("two.csv", "1\n0\n");
    const fs::path cyc = write_temp("cycle.json", R"({"n": 2, "edges": [[0,1],[1,0]]})");
    const std::string base =
        "fit --input " + y.string() + " --graph edges:" + cyc.string() + " --lambda-ni 0.3";
    CHECK(run_cli(base).exit_code == 4);
    const auto ok = run_cli(base + " --allow-cyclic");
    CHECK(ok.exit_code == 0);
    const auto j = nlohmann::json::parse(ok.out);
    // both orientations penalized: acts like a fusion penalty of the same weight
    const auto beta = j["beta"].get<std::vector<double>>();
    CHECK(beta[0] == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(beta[1] == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("cli edge-list and grid graphs") {
    const fs::path y = write_temp("four.csv", "0.4\n0.1\n0.9\n0.2\n");
    const fs::path edges = write_temp("v.json", R"({"n": 4, "edges": [[0,2],[1,2],[2,3]]})");
    const auto r =
        run_cli("fit --input " + y.string() + " --graph edges:" + edges.string());
    CHECK(r.exit_code == 0);
    const auto g = run_cli("fit --input " + y.string() + " --graph grid:2x2");
    CHECK(g.exit_code == 0);
}

TEST_CASE("cli path command") {
    const fs::path y = write_temp("path_y.csv", "0.9\n2.1\n2.9\n4.2\n");

    SUBCASE("single-row grid") {
        const fs::path grid = write_temp("grid1.csv", "0.1,0,0.2\n");
        const auto r = run_cli("path --input " + y.string() +
                               " --graph chain:4 --grid " + grid.string() + " --sigma2 1.0");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["best_index"].get<int>() == 0);
        CHECK(j["entries"].size() == 1);
    }

    SUBCASE("duplicate rows tie to the smallest index") {
        const fs::path grid = write_temp("grid2.csv", "0.1,0,0.2\n0.1,0,0.2\n");
        const auto r = run_cli("path --input " + y.string() +
                               " --graph chain:4 --grid " + grid.string() + " --sigma2 1.0");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["best_index"].get<int>() == 0);
        CHECK(j["entries"][0]["cp"].get<double>() == j["entries"][1]["cp"].get<double>());
    }

    SUBCASE("missing sigma2 exits 5, estimator flag fills it in") {
        const fs::path grid = write_temp("grid3.csv", "0,0,0.5\n");
        const std::string base =
            "path --input " + y.string() + " --graph chain:4 --grid " + grid.string();
        CHECK(run_cli(base).exit_code == 5);
        const auto est = run_cli(base + " --estimate-sigma2");
        REQUIRE(est.exit_code == 0);
        CHECK(nlohmann::json::parse(est.out)["sigma2"].get<double>() > 0.0);
    }

    SUBCASE("constant signal makes the estimator degenerate") {
        const fs::path flat = write_temp("flat.csv", "1\n1\n1\n");
        const fs::path grid = write_temp("grid4.csv", "0,0,0.5\n");
        const auto r = run_cli("path --input " + flat.string() + " --graph chain:3 --grid " +
                               grid.string() + " --estimate-sigma2");
        CHECK(r.exit_code == 5);
    }

    SUBCASE("cp values match the library bit for bit") {
        const fs::path grid = write_temp("grid5.csv", "0,0,0\n0,0,0.4\n0.3,0.1,0\n");
        const auto r = run_cli("path --input " + y.string() +
                               " --graph chain:4 --grid " + grid.string() + " --sigma2 0.7");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        const auto path = flni::sweep_path(
            {0.9, 2.1, 2.9, 4.2}, flni::build_chain_graph(4),
            {{0, 0, 0}, {0, 0, 0.4}, {0.3, 0.1, 0}}, 0.7);
        REQUIRE(j["entries"].size() == path.entries.size());
        for (std::size_t i = 0; i < path.entries.size(); ++i) {
            CHECK(j["entries"][i]["cp"].get<double>() == path.entries[i].cp);
        }
        CHECK(j["best_index"].get<int>() == path.best_index);
    }
}

TEST_CASE("cli determinism across runs and thread counts") {
    const fs::path y = write_temp("det_y.csv", "1.5\n0.4\n2.2\n-0.3\n0.9\n1.8\n");
    const fs::path grid =
        write_temp("det_grid.csv", "0,0,0\n0.1,0,0.2\n0.4,0.1,0\n0,0.2,0.6\n0.5,0.5,0.5\n");
    const std::string fit_args = "fit --input " + y.string() + " --graph chain:6 --lambda-f 0.2 "
                                 "--lambda-l 0.1 --lambda-ni 0.4";
    const std::string path_args = "path --input " + y.string() + " --graph grid:2x3 --grid " +
                                  grid.string() + " --sigma2 1.0";

    const auto fit1 = run_cli(fit_args);
    const auto fit2 = run_cli(fit_args);
    REQUIRE(fit1.exit_code == 0);
    CHECK(fit1.out == fit2.out);

    const auto p1 = run_cli(path_args, "FLNI_THREADS=1");
    const auto p2 = run_cli(path_args, "FLNI_THREADS=4");
    const auto p3 = run_cli(path_args, "FLNI_THREADS=1");
    REQUIRE(p1.exit_code == 0);
    CHECK(p1.out == p2.out);
    CHECK(p1.out == p3.out);
}

TEST_CASE("cli certification surfaces") {
    const fs::path y = write_temp("cert_y.csv", "1\n0\n");

    SUBCASE("fit --certify attaches a certificate") {
        const auto r = run_cli("fit --input " + y.string() +
                               " --graph chain:2 --lambda-ni 0.3 --certify");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["certificate"]["residual"].get<double>() <= 1e-8);
    }

    SUBCASE("certify command checks a provided vector") {
        const fs::path good = write_temp("cert_good.csv", "0.7\n0.3\n");
        const auto ok = run_cli("certify --input " + y.string() + " --graph chain:2 --beta " +
                                good.string() + " --lambda-ni 0.3");
        REQUIRE(ok.exit_code == 0);
        CHECK(nlohmann::json::parse(ok.out)["residual"].get<double>() <= 1e-9);

        const fs::path bad = write_temp("cert_bad.csv", "1\n0\n");
        const auto no = run_cli("certify --input " + y.string() + " --graph chain:2 --beta " +
                                bad.string() + " --lambda-ni 0.3");
        REQUIRE(no.exit_code == 0);
        CHECK(nlohmann::json::parse(no.out)["residual"].get<double>() >= 0.29);

        const fs::path short_beta = write_temp("cert_short.csv", "0.7\n");
        CHECK(run_cli("certify --input " + y.string() + " --graph chain:2 --beta " +
                      short_beta.string())
                  .exit_code == 3);
    }
}
