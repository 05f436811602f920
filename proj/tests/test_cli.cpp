#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef FANNOWAVE_CLI_PATH
#error "FANNOWAVE_CLI_PATH must point at the built binary"
#endif

namespace {

const std::string kDir = "/tmp/fannowave_cli_test";

std::string path_of(const std::string& name) { return kDir + "/" + name; }

void write_file(const std::string& name, const std::string& content) {
    std::ofstream f(path_of(name), std::ios::binary);
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct RunResult {
    int status = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const std::string out = path_of("stdout.txt");
    const std::string cmd =
        std::string(FANNOWAVE_CLI_PATH) + " " + args + " > " + out + " 2> " + path_of("stderr.txt");
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.stdout_text = read_file(out);
    return r;
}

// tiny grids keep every invocation under a second
const char* kTinyConfig =
    "duct.n_x = 65\n"
    "time.n_t = 32\n"
    "boundary.K1 = 0.5\n"
    "boundary.K3 = 0.5\n"
    "boundary.G1.harmonics = 0.001:1:0\n";

bool setup_done = [] {
    return std::system(("rm -rf " + kDir + " && mkdir -p " + kDir).c_str()) == 0;
}();

}  // namespace

TEST_CASE("steady subcommand writes profile and report") {
    write_file("tiny.cfg", kTinyConfig);
    const RunResult r = run_cli("steady --config " + path_of("tiny.cfg") + " --out " +
                                path_of("profile.csv") + " --report " + path_of("steady.json"));
    CHECK(r.status == 0);
    CHECK(r.stdout_text.find("STEADY u_L=0.2") != std::string::npos);

    const std::string csv = read_file(path_of("profile.csv"));
    CHECK(csv.rfind("x,u,c,S,r1,r3,lam1,lam2,lam3\n", 0) == 0);

    const std::string json = read_file(path_of("steady.json"));
    CHECK(json.find("\"duct.n_x\": \"65\"") != std::string::npos);
    CHECK(json.find("\"u_min\": 0.2") != std::string::npos);
}

TEST_CASE("lmax reports the no-choking sentinel without damping") {
    write_file("nodamp.cfg", "damping.coeffs = 0\n");
    const RunResult r =
        run_cli("lmax --config " + path_of("nodamp.cfg") + " --report " + path_of("lmax.json"));
    CHECK(r.status == 0);
    CHECK(r.stdout_text.find("LMAX=inf") != std::string::npos);
    CHECK(read_file(path_of("lmax.json")).find("\"lmax\": \"inf\"") != std::string::npos);
}

TEST_CASE("config errors surface as json with nonzero status") {
    write_file("bad.cfg", "gas.gamma = 3.5\n");
    const RunResult r = run_cli("steady --config " + path_of("bad.cfg"));
    CHECK(r.status == 1);
    CHECK(r.stdout_text.find("\"type\": \"ConfigError\"") != std::string::npos);
    CHECK(r.stdout_text.find("gas.gamma") != std::string::npos);
}

TEST_CASE("missing config file is a config error") {
    const RunResult r = run_cli("lmax --config " + path_of("does_not_exist.cfg"));
    CHECK(r.status == 1);
    CHECK(r.stdout_text.find("\"type\": \"ConfigError\"") != std::string::npos);
}

TEST_CASE("build-periodic on steady-compatible forcing stops immediately") {
    write_file("fixp.cfg",
               "duct.n_x = 65\n"
               "time.n_t = 32\n"
               "boundary.K1 = 0.5\n"
               "boundary.K3 = 0.5\n");
    const RunResult r = run_cli("build-periodic --config " + path_of("fixp.cfg") + " --report " +
                                path_of("fixp.json"));
    CHECK(r.status == 0);
    CHECK(r.stdout_text.find("BUILD iterations=1 ") != std::string::npos);
    const std::string json = read_file(path_of("fixp.json"));
    CHECK(json.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical artifacts") {
    write_file("rerun.cfg", kTinyConfig);
    const std::string args = "build-periodic --config " + path_of("rerun.cfg");
    CHECK(run_cli(args + " --out " + path_of("f1.csv") + " --report " + path_of("r1.json")).status ==
          0);
    CHECK(run_cli(args + " --out " + path_of("f2.csv") + " --report " + path_of("r2.json")).status ==
          0);
    const std::string f1 = read_file(path_of("f1.csv"));
    CHECK(!f1.empty());
    CHECK(f1 == read_file(path_of("f2.csv")));
    CHECK(read_file(path_of("r1.json")) == read_file(path_of("r2.json")));
}

TEST_CASE("simulate runs the periodic orbit forward") {
    write_file("sim.cfg", kTinyConfig);
    const RunResult r = run_cli("simulate --config " + path_of("sim.cfg") + " --tfinal 0.5 --out " +
                                path_of("traj.csv") + " --report " + path_of("sim.json"));
    CHECK(r.status == 0);
    CHECK(r.stdout_text.find("SIMULATE steps=") != std::string::npos);
    const std::string csv = read_file(path_of("traj.csv"));
    CHECK(csv.rfind("t,x,phi1,phi2,phi3,rho,u,S\n", 0) == 0);
    const std::string json = read_file(path_of("sim.json"));
    CHECK(json.find("\"t_final\": 0.5") != std::string::npos);
    CHECK(json.find("\"certificate\"") != std::string::npos);
}

TEST_CASE("cross-validation passes on a quiet orbit") {
    write_file("xv.cfg",
               "duct.n_x = 65\n"
               "time.n_t = 32\n"
               "boundary.K1 = 0.5\n"
               "boundary.K3 = 0.5\n");
    const RunResult r =
        run_cli("xvalidate --config " + path_of("xv.cfg") + " --report " + path_of("xv.json"));
    CHECK(r.status == 0);
    CHECK(r.stdout_text.find("pass=1") != std::string::npos);
    const std::string json = read_file(path_of("xv.json"));
    CHECK(json.find("\"pass\": true") != std::string::npos);
    CHECK(json.find("\"refined\"") == std::string::npos);  // no --refine requested
}

TEST_CASE("unknown subcommand fails") {
    const RunResult r = run_cli("frobnicate --config " + path_of("tiny.cfg"));
    CHECK(r.status != 0);
}
