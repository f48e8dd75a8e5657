#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dcp/controllers.hpp"
#include "dcp/scenario.hpp"
#include "dcp/simulate.hpp"

namespace dcp {

// Everything a run needs, merged from defaults, a config file, and command
// line flags.  The custom-scenario payload stays as raw strings until
// resolve_scenario builds the functions.
struct RunConfig {
    std::string scenario = "case1";  // case1 | case2 | custom
    bool scenario_explicit = false;  // a config key or flag named the scenario
    std::vector<std::string> controllers = {"cbf_qp", "penalty_qp", "dcp"};
    // Empty means: use the scenario's default set.
    std::vector<Eigen::VectorXd> initial_conditions;
    DcpControllerConfig dcp;
    bool k_explicit = false;  // whether a k was given, else scenario default
    IntegratorConfig integrator;
    double penalty = 10.0;
    std::string output_dir = "out";
    bool emit_svg = true;
    unsigned seed = 0;

    // [scenario] section, consulted only when scenario == "custom":
    // drift and input are row-major constant matrices (f(x) = A x), h is a
    // bivariate polynomial "i:j:coef; ...", v_quad the matrix of
    // V = 1/2 x' P x, alphas "identity" or "linear:<lambda>".
    std::map<std::string, std::string> custom;
};

// Flat key = value lines under [section] headers; '#' starts a comment.
// Parse errors carry file:line in the ConfigError message.
RunConfig parse_config_file(const std::filesystem::path& path);

// Applies one key under a section to the config; shared between the file
// parser and flag handling.  Throws ConfigError on unknown keys or values.
void apply_config_key(RunConfig& cfg, const std::string& section,
                      const std::string& key, const std::string& value,
                      const std::string& where);

// "x1,x2; x1,x2; ..." into states.
std::vector<Eigen::VectorXd> parse_state_list(const std::string& text,
                                              const std::string& where);

// Builds the scenario the config names, including the custom payload.
Scenario resolve_scenario(const RunConfig& cfg);

}  // namespace dcp
