// Drives the installed dcpsim binary end to end through std::system; the
// path arrives in DCPSIM_BIN from the build.  Artifacts go to per-test
// directories under the system temp dir.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kBin = DCPSIM_BIN;

int run_cmd(const std::string& full) {
    const int st = std::system(full.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

int run(const std::string& args) {
    return run_cmd(kBin + " " + args + " >/dev/null 2>&1");
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path d = fs::temp_directory_path() /
                       ("dcpsim_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    REQUIRE(out.good());
    out << text;
}

nlohmann::json load_json(const fs::path& p) {
    return nlohmann::json::parse(slurp(p));
}

size_t line_count(const std::string& text) {
    size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("simulate writes csv, json, and svg and exits zero") {
    const fs::path out = fresh_dir("sim");
    const int rc = run("simulate --scenario case1 --controllers dcp "
                       "--init \"0,7\" --t-max 0.05 --output-dir " +
                       out.string());
    CHECK(rc == 0);

    const fs::path csv = out / "case1_dcp_init0.csv";
    const fs::path json = out / "case1_dcp_init0.json";
    REQUIRE(fs::exists(csv));
    REQUIRE(fs::exists(json));
    CHECK(fs::exists(out / "case1_trajectories.svg"));

    const std::string body = slurp(csv);
    CHECK(body.rfind("t,x1,x2,u1,u2,h,V,u_bar_l,u_bar_h\n", 0) == 0);
    CHECK(line_count(body) >= 51);

    const nlohmann::json j = load_json(json);
    CHECK(j.at("outcome") == "Timeout");
    CHECK(j.at("steps").get<int>() >= 50);
    CHECK(j.at("min_h").get<double>() > 0.0);
}

TEST_CASE("simulate output is byte-for-byte reproducible") {
    const fs::path a = fresh_dir("rep_a");
    const fs::path b = fresh_dir("rep_b");
    const std::string tail = "simulate --scenario case2 --controllers dcp "
                             "--init \"0,5.3\" --t-max 0.1 --output-dir ";
    REQUIRE(run(tail + a.string()) == 0);
    REQUIRE(run(tail + b.string()) == 0);
    CHECK(slurp(a / "case2_dcp_init0.csv") ==
          slurp(b / "case2_dcp_init0.csv"));
    CHECK(slurp(a / "case2_trajectories.svg") ==
          slurp(b / "case2_trajectories.svg"));
}

TEST_CASE("--no-svg suppresses the plot artifacts") {
    const fs::path out = fresh_dir("nosvg");
    REQUIRE(run("simulate --scenario case1 --controllers cbf_qp "
                "--init \"0,7\" --t-max 0.05 --no-svg --output-dir " +
                out.string()) == 0);
    CHECK(fs::exists(out / "case1_cbf_qp_init0.csv"));
    CHECK(!fs::exists(out / "case1_trajectories.svg"));
}

TEST_CASE("flags override the config file, the environment overrides flags") {
    const fs::path cfg_dir = fresh_dir("prec_cfg");
    const fs::path flag_dir = fresh_dir("prec_flag");
    const fs::path env_dir = fresh_dir("prec_env");
    // fresh_dir pre-creates; the assertion below is about file content.
    fs::remove_all(cfg_dir);

    const fs::path cfg = fresh_dir("prec") / "run.cfg";
    write_file(cfg, "# precedence probe\n"
                    "[run]\n"
                    "scenario = case2\n"
                    "output_dir = " + cfg_dir.string() + "\n"
                    "[integrator]\n"
                    "t_max = 0.05\n");

    const std::string tail = " simulate --config " + cfg.string() +
                             " --scenario case1 --controllers dcp "
                             "--init \"0,7\" --no-svg --output-dir " +
                             flag_dir.string() + " >/dev/null 2>&1";

    REQUIRE(run_cmd("DCP_OUTPUT_DIR=" + env_dir.string() + " " + kBin +
                    tail) == 0);
    CHECK(fs::exists(env_dir / "case1_dcp_init0.csv"));
    CHECK(!fs::exists(flag_dir / "case1_dcp_init0.csv"));

    REQUIRE(run_cmd(kBin + tail) == 0);
    CHECK(fs::exists(flag_dir / "case1_dcp_init0.csv"));
    // The config file's scenario lost to the flag, so nothing was written
    // under the config-file directory and no case2 artifact appeared.
    CHECK(!fs::exists(cfg_dir));
    CHECK(!fs::exists(flag_dir / "case2_dcp_init0.csv"));
}

TEST_CASE("configuration problems exit with code 1") {
    const fs::path out = fresh_dir("cfgerr");
    const std::string common =
        " --t-max 0.05 --no-svg --output-dir " + out.string();

    CHECK(run("simulate --scenario case9" + common) == 1);

    const fs::path bad = out / "bad.cfg";
    write_file(bad, "[run]\nscenario case1\n");
    CHECK(run("simulate --config " + bad.string() + common) == 1);

    // A [scenario] section with no scenario = custom would be silently dead.
    const fs::path orphan = out / "orphan.cfg";
    write_file(orphan, "[scenario]\ndrift = -1,0;0,-1\n");
    CHECK(run("simulate --config " + orphan.string() + " --init \"0,7\"" +
              common) == 1);

    CHECK(run("simulate --config " + (out / "missing.cfg").string() +
              common) == 1);

    // h(0,4) = -4: inside the obstacle.
    CHECK(run("simulate --scenario case1 --init \"0,4\"" + common) == 1);
    CHECK(run("simulate --scenario case1 --init \"11,0\"" + common) == 1);
    CHECK(run("simulate --scenario case1 --init \"1,2,3\"" + common) == 1);
    CHECK(run("simulate --scenario case1 --controllers \"\" --init \"0,7\"" +
              common) == 1);
    CHECK(run("simulate --scenario case1 --controllers foo --init \"0,7\"" +
              common) == 1);
    CHECK(run("simulate --scenario case1 --k=-1 --init \"0,7\"" + common) ==
          1);
    CHECK(run("simulate --scenario case1 --wp-sign 2 --init \"0,7\"" +
              common) == 1);
    CHECK(run("simulate --scenario case1 --wh-mode foo --init \"0,7\"" +
              common) == 1);
}

TEST_CASE("usage errors from the argument parser are nonzero") {
    CHECK(run("") != 0);
    CHECK(run("frobnicate") != 0);
    CHECK(run("simulate --bogus-flag 1") != 0);
    CHECK(run("ksweep --scenario case1") != 0);  // --k-values is required
}

TEST_CASE("--help succeeds and names the subcommands") {
    const fs::path out = fresh_dir("help");
    const fs::path text = out / "help.txt";
    CHECK(run_cmd(kBin + " --help > " + text.string() + " 2>&1") == 0);
    const std::string body = slurp(text);
    CHECK(body.find("simulate") != std::string::npos);
    CHECK(body.find("ksweep") != std::string::npos);
    CHECK(body.find("analyze") != std::string::npos);
}

TEST_CASE("ksweep at k = 0 reproduces the naive-mode rollout exactly") {
    const fs::path sweep_dir = fresh_dir("ks0");
    const fs::path sim_dir = fresh_dir("ks0_sim");

    REQUIRE(run("ksweep --scenario case1 --k-values 0 --x0 \"0,7\" "
                "--t-max 0.2 --no-svg --output-dir " +
                sweep_dir.string()) == 0);
    REQUIRE(run("simulate --scenario case1 --controllers dcp --k 0 "
                "--wh-mode naive --init \"0,7\" --t-max 0.2 --no-svg "
                "--output-dir " +
                sim_dir.string()) == 0);

    const std::string sweep_csv = slurp(sweep_dir / "case1_ksweep_k0.csv");
    const std::string sim_csv = slurp(sim_dir / "case1_dcp_init0.csv");
    CHECK(sweep_csv == sim_csv);

    const std::string summary = slurp(sweep_dir / "case1_ksweep.csv");
    CHECK(summary.rfind("k,outcome,x1_end,x2_end,min_h\n", 0) == 0);
    CHECK(summary.find("\n0,Timeout,") != std::string::npos);
}

TEST_CASE("ksweep argument validation") {
    const fs::path out = fresh_dir("ks_err");
    const std::string common = " --scenario case1 --t-max 0.05 --no-svg "
                               "--output-dir " + out.string();
    CHECK(run("ksweep --k-values \",\"" + common) == 1);
    CHECK(run("ksweep --k-values \"1,abc\"" + common) == 1);
    CHECK(run("ksweep --k-values \"1,-3\"" + common) == 1);
    CHECK(run("ksweep --k-values 1 --x0 \"1,2;3,4\"" + common) == 1);
    CHECK(run("ksweep --k-values 1 --x0 \"0,4\"" + common) == 1);
}

TEST_CASE("analyze emits a census whose sets nest") {
    const fs::path out = fresh_dir("ana");
    REQUIRE(run("analyze --scenario case1 --nu 0.5 --samples 360 --no-svg "
                "--output-dir " +
                out.string()) == 0);

    const nlohmann::json j = load_json(out / "case1_kbound.json");
    CHECK(j.at("scenario") == "case1");
    CHECK(j.at("n_samples").get<int>() == 360);
    const int n_omega = j.at("count_omega").get<int>();
    const int n_x = j.at("count_x").get<int>();
    const int n_q = j.at("count_q").get<int>();
    CHECK(n_q <= n_x);
    CHECK(n_x <= n_omega);
    CHECK(n_omega <= 360);
    CHECK(!j.at("x_empty").get<bool>());
    CHECK(j.at("k_lower_bound").get<double>() > 0.0);

    const std::string csv = slurp(out / "case1_boundary.csv");
    CHECK(csv.rfind("x1,x2,h,Fu_norm,Gwp_norm,u_bar_h,parallel_residual,"
                    "in_Omega,in_X,in_S,in_Q\n",
                    0) == 0);
    CHECK(line_count(csv) == 361);
}

TEST_CASE("analyze census shrinks as nu tightens") {
    int prev = std::numeric_limits<int>::max();
    int i = 0;
    for (const char* nu : {"1.0", "0.5", "0.1"}) {
        const fs::path out = fresh_dir("ana_nu" + std::to_string(i++));
        REQUIRE(run("analyze --scenario case1 --nu " + std::string(nu) +
                    " --samples 180 --no-svg --output-dir " +
                    out.string()) == 0);
        const int n_q =
            load_json(out / "case1_kbound.json").at("count_q").get<int>();
        CHECK(n_q <= prev);
        prev = n_q;
    }
}

TEST_CASE("analyze argument validation") {
    const fs::path out = fresh_dir("ana_err");
    const std::string common =
        " --scenario case1 --no-svg --output-dir " + out.string();
    CHECK(run("analyze --nu 0" + common) == 1);
    CHECK(run("analyze --nu=-1" + common) == 1);
    CHECK(run("analyze --samples 4" + common) == 1);
}

TEST_CASE("a controller fault mid-run exits 2 and records the abort") {
    const fs::path out = fresh_dir("abort");
    const fs::path cfg = out / "degenerate.cfg";
    // Zero input matrix: the stabilizing direction vanishes everywhere
    // while the decrease condition still binds, so the law throws at the
    // first evaluation.
    write_file(cfg, "[run]\n"
                    "scenario = custom\n"
                    "controllers = cbf_qp\n"
                    "initial_conditions = 1,1\n"
                    "[integrator]\n"
                    "t_max = 0.5\n"
                    "[scenario]\n"
                    "drift = 1,0;0,1\n"
                    "input = 0,0;0,0\n"
                    "v_quad = 1,0;0,1\n"
                    "h_poly = 2:0:1; 0:2:1; 0:0:-0.25\n");
    CHECK(run("simulate --config " + cfg.string() + " --no-svg "
              "--output-dir " + out.string()) == 2);

    const nlohmann::json j = load_json(out / "custom_cbf_qp_init0.json");
    CHECK(j.at("outcome") == "Aborted");
    CHECK(j.contains("error"));
}

TEST_CASE("a custom scenario without initial conditions is a config error") {
    const fs::path out = fresh_dir("noinit");
    const fs::path cfg = out / "custom.cfg";
    write_file(cfg, "[run]\n"
                    "scenario = custom\n"
                    "[scenario]\n"
                    "drift = -1,0;0,-1\n"
                    "v_quad = 1,0;0,1\n"
                    "h_poly = 2:0:1; 0:2:1; 0:0:-0.25\n");
    const std::string common = " --config " + cfg.string() +
                               " --no-svg --output-dir " + out.string();
    CHECK(run("simulate" + common) == 1);
    CHECK(run("ksweep --k-values 1" + common) == 1);
}
