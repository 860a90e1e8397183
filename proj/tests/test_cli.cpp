#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string cli = MKDV_CLI_PATH;
const std::string dir = "/tmp/mkdv_cli_test";

int run(const std::string &args) {
    std::string cmd = cli + " " + args + " > " + dir + "/stdout.txt 2> " + dir + "/stderr.txt";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_profile(const std::string &path, bool perturbed) {
    std::ofstream out(path);
    out.precision(17);
    out << "x,q\n";
    for (int i = 0; i <= 3000; ++i) {
        double x = -30.0 + 60.0 * i / 3000.0;
        double q = std::tanh(x) + (perturbed ? 0.3 * std::exp(-x * x) : 0.0);
        out << x << "," << q << "\n";
    }
}

struct Setup {
    Setup() {
        fs::create_directories(dir);
        write_profile(dir + "/kink.csv", false);
        write_profile(dir + "/bump.csv", true);
    }
};
const Setup setup_once{};

}  // namespace

TEST_CASE("scatter: kink profile yields one pole near i") {
    int rc = run("scatter --profile " + dir + "/kink.csv --zgrid geom:4:60 --out " + dir +
                 "/scat.json");
    CHECK(rc == 0);
    auto j = json::parse(slurp(dir + "/scat.json"));
    REQUIRE(j["poles"].size() == 1);
    CHECK(std::abs(j["poles"][0]["re"].get<double>()) < 1e-7);
    CHECK(j["poles"][0]["im"].get<double>() == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(j["mass"].get<double>() == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(fs::exists(dir + "/scat.json.manifest.json"));
}

TEST_CASE("scatter: empty profile exits 2 with a machine-readable error") {
    { std::ofstream out(dir + "/empty.csv"); }
    int rc = run("scatter --profile " + dir + "/empty.csv --out " + dir + "/x.json");
    CHECK(rc == 2);
    auto err = json::parse(slurp(dir + "/stderr.txt"));
    CHECK(err.contains("error"));
    CHECK(err["error"]["type"] == "validation");
    CHECK(!fs::exists(dir + "/x.json"));
}

TEST_CASE("scatter: grid touching the margin exits 2") {
    int rc = run("scatter --profile " + dir + "/kink.csv --zgrid lin:0.99:1.01:5 --out " +
                 dir + "/y.json");
    CHECK(rc == 2);
    auto err = json::parse(slurp(dir + "/stderr.txt"));
    std::string msg = err["error"]["message"].get<std::string>();
    CHECK(msg.find("margin") != std::string::npos);
}

TEST_CASE("painleve: p out of range exits 2; valid run writes the anchor") {
    CHECK(run("painleve --p 1.2 --out " + dir + "/p.csv") == 2);

    CHECK(run("painleve --p 0.5 --smin -4 --out " + dir + "/pii.csv") == 0);
    // u(8) ~ -0.5 Ai(8); Ai(8) ~ 2.7e-7 -> |u(8)| < 1e-6 and negative
    std::ifstream in(dir + "/pii.csv");
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "s,u,uprime,I");
    double u8 = 1.0;
    while (std::getline(in, row)) {
        double s, u;
        if (std::sscanf(row.c_str(), "%lf,%lf", &s, &u) == 2 && std::abs(s - 8.0) < 1e-9)
            u8 = u;
    }
    CHECK(u8 < 0.0);
    CHECK(std::abs(u8) < 1e-6);

    // p = 0 gives the all-zero solution column
    CHECK(run("painleve --p 0 --smin -2 --out " + dir + "/pii0.csv") == 0);
    std::ifstream in0(dir + "/pii0.csv");
    std::getline(in0, header);
    while (std::getline(in0, row)) {
        double s, u;
        REQUIRE(std::sscanf(row.c_str(), "%lf,%lf", &s, &u) == 2);
        CHECK(u == 0.0);
    }
}

TEST_CASE("deterministic output: identical runs produce identical bytes") {
    CHECK(run("painleve --p 0.7 --smin -3 --out " + dir + "/d1.csv") == 0);
    CHECK(run("painleve --p 0.7 --smin -3 --out " + dir + "/d2.csv") == 0);
    CHECK(slurp(dir + "/d1.csv") == slurp(dir + "/d2.csv"));
}

TEST_CASE("signature grid CSV") {
    int rc = run("signature --xi -6 --bounds -2:2:-2:2 --res 21:20 --out " + dir + "/sig.csv");
    CHECK(rc == 0);
    std::ifstream in(dir + "/sig.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "u,v,sign");
    int rows = 0;
    std::string row;
    while (std::getline(in, row)) ++rows;
    CHECK(rows == 21 * 20);
}

TEST_CASE("simulate: snapshots and conservation ledger") {
    int rc = run("simulate --profile " + dir + "/bump.csv --T 1 --L 60 --N 1024 --dt 0.005 "
                 "--snapshots 0.5 --out " +
                 dir + "/sim");
    CHECK(rc == 0);
    CHECK(fs::exists(dir + "/sim_t0.5.csv"));
    CHECK(fs::exists(dir + "/sim_t1.csv"));
    auto man = json::parse(slurp(dir + "/sim.manifest.json"));
    // ledger plumbing; the strict conservation bounds run on the full-size box
    // in the module and acceptance suites
    CHECK(std::abs(std::stod(man["notes"]["mass_drift"].get<std::string>())) < 1e-2);
}

TEST_CASE("phase: p and phi0 for the perturbed kink") {
    int rc = run("phase --profile " + dir + "/bump.csv --out " + dir + "/phase.json");
    CHECK(rc == 0);
    auto j = json::parse(slurp(dir + "/phase.json"));
    CHECK(j["generic"].get<bool>());
    CHECK(j["p"].get<double>() == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("asymptote consumes phase.json + pii.csv") {
    REQUIRE(run("phase --profile " + dir + "/bump.csv --out " + dir + "/ph2.json") == 0);
    REQUIRE(run("painleve --p 1.0 --smin -4 --out " + dir + "/pii2.csv") == 0);
    int rc = run("asymptote --phase " + dir + "/ph2.json --pii " + dir +
                 "/pii2.csv --tlist 5,10 --swindow -2:2:9 --out " + dir + "/asym.csv");
    CHECK(rc == 0);
    std::ifstream in(dir + "/asym.csv");
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "x,t,s,q_asym");
    int rows = 0;
    while (std::getline(in, row)) ++rows;
    CHECK(rows == 18);
}

TEST_CASE("compare with an injected reflectionless table wires the pipeline") {
    // t large enough that the kink (at x = -2t) has left the observation
    // window near x = -6t; the pure kink radiates nothing
    int rc = run("compare --profile " + dir + "/kink.csv --tlist 4,8 --swindow -1:1:5 "
                 "--L 60 --N 1024 --dt 0.005 --inject-reflectionless --out " +
                 dir + "/rep");
    CHECK(rc == 0);
    auto j = json::parse(slurp(dir + "/rep.json"));
    CHECK(j["phase"]["p"].get<double>() == 0.0);
    // q_asym = -1 identically; the simulator sits on the kink background,
    // whose distance from -1 near x = -6t is exponentially small
    std::ifstream in(dir + "/rep.csv");
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "x,t,s,q_asym,q_sim,abs_err");
    while (std::getline(in, row)) {
        double x, t, s, qa, qs, err;
        REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &x, &t, &s, &qa, &qs,
                            &err) == 6);
        CHECK(qa == -1.0);
        CHECK(err < 1e-3);
    }
}

TEST_CASE("duplicate t values are deduplicated with a warning") {
    int rc = run("simulate --profile " + dir + "/bump.csv --T 1 --L 60 --N 1024 --dt 0.005 "
                 "--snapshots 0.5,0.5 --out " +
                 dir + "/dup");
    CHECK(rc == 0);
    CHECK(fs::exists(dir + "/dup_t0.5.csv"));
}
