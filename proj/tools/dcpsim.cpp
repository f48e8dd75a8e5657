// Command-line harness over the library: rollout comparisons, gain sweeps,
// and boundary classification, emitting CSV/JSON/SVG into the output
// directory.  Exit codes: 0 success, 1 configuration problem, 2 runtime
// failure (including any rollout that aborts).
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <json.hpp>

#include "dcp/analysis.hpp"
#include "dcp/controllers.hpp"
#include "dcp/errors.hpp"
#include "dcp/run_config.hpp"
#include "dcp/scenario.hpp"
#include "dcp/simulate.hpp"
#include "dcp/svg.hpp"
#include "dcp/trajectory_io.hpp"

namespace fs = std::filesystem;

namespace {

// One string slot per shared flag; values pass through apply_config_key so
// flags and config files share a single validation path.  Precedence is
// defaults, then config file, then flags, then DCP_OUTPUT_DIR.
struct CommonCli {
    std::string config;
    std::string scenario, controllers, init, k, wp_sign, wh_mode;
    std::string penalty, dt, t_max, output_dir, seed;
    bool svg = true;
    CLI::Option *o_config = nullptr, *o_scenario = nullptr,
                *o_controllers = nullptr, *o_init = nullptr, *o_k = nullptr,
                *o_wp_sign = nullptr, *o_wh_mode = nullptr,
                *o_penalty = nullptr, *o_dt = nullptr, *o_t_max = nullptr,
                *o_output_dir = nullptr, *o_seed = nullptr, *o_svg = nullptr;
};

void add_common(CLI::App* cmd, CommonCli& c) {
    c.o_config = cmd->add_option("--config", c.config,
                                 "config file (key = value under [sections])");
    c.o_scenario =
        cmd->add_option("--scenario", c.scenario, "case1, case2, or custom");
    c.o_controllers = cmd->add_option(
        "--controllers", c.controllers,
        "comma-separated subset of cbf_qp,penalty_qp,dcp");
    c.o_init = cmd->add_option("--init", c.init,
                               "initial conditions \"x1,x2; x1,x2; ...\"");
    c.o_k = cmd->add_option("--k", c.k, "null-space gain (>= 0)");
    c.o_wp_sign = cmd->add_option("--wp-sign", c.wp_sign,
                                  "null-space direction sign, 1 or -1");
    c.o_wh_mode =
        cmd->add_option("--wh-mode", c.wh_mode, "nullspace or naive");
    c.o_penalty =
        cmd->add_option("--penalty", c.penalty, "relaxation penalty (> 0)");
    c.o_dt = cmd->add_option("--dt", c.dt, "integration step");
    c.o_t_max = cmd->add_option("--t-max", c.t_max, "rollout horizon");
    c.o_output_dir =
        cmd->add_option("--output-dir", c.output_dir, "artifact directory");
    c.o_seed = cmd->add_option("--seed", c.seed, "sampling seed");
    c.o_svg = cmd->add_flag("--svg,!--no-svg", c.svg, "write SVG artifacts");
}

dcp::RunConfig build_config(const CommonCli& c) {
    dcp::RunConfig cfg;
    if (c.o_config->count()) cfg = dcp::parse_config_file(c.config);

    auto apply = [&](CLI::Option* o, const char* section, const char* key,
                     const std::string& value) {
        if (o->count()) {
            dcp::apply_config_key(cfg, section, key, value, o->get_name());
        }
    };
    apply(c.o_scenario, "run", "scenario", c.scenario);
    apply(c.o_controllers, "run", "controllers", c.controllers);
    apply(c.o_init, "run", "initial_conditions", c.init);
    apply(c.o_k, "dcp", "k", c.k);
    apply(c.o_wp_sign, "dcp", "wp_sign", c.wp_sign);
    apply(c.o_wh_mode, "dcp", "wh_mode", c.wh_mode);
    apply(c.o_penalty, "run", "penalty", c.penalty);
    apply(c.o_dt, "integrator", "dt", c.dt);
    apply(c.o_t_max, "integrator", "t_max", c.t_max);
    apply(c.o_output_dir, "run", "output_dir", c.output_dir);
    apply(c.o_seed, "run", "seed", c.seed);
    if (c.o_svg->count()) {
        dcp::apply_config_key(cfg, "run", "emit_svg",
                              c.svg ? "true" : "false", "--svg");
    }
    if (const char* env = std::getenv("DCP_OUTPUT_DIR"); env && *env) {
        cfg.output_dir = env;
    }
    return cfg;
}

std::string state_str(const Eigen::VectorXd& x) {
    std::string s = "(";
    char buf[32];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6g", x(i));
        if (i) s += ", ";
        s += buf;
    }
    return s + ")";
}

void validate_init(const dcp::Scenario& sc, const Eigen::VectorXd& x0) {
    if (x0.size() != sc.sys.state_dim) {
        throw dcp::ConfigError("initial condition " + state_str(x0) +
                               " has wrong dimension for " + sc.name);
    }
    const double h0 = sc.cbf.value(x0);
    if (h0 < 0.0) {
        throw dcp::ConfigError("initial condition " + state_str(x0) +
                               " is unsafe: h = " + std::to_string(h0));
    }
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
        if (x0(i) < sc.domain_min(i) || x0(i) > sc.domain_max(i)) {
            throw dcp::ConfigError("initial condition " + state_str(x0) +
                                   " lies outside the domain box");
        }
    }
}

struct RunContext {
    dcp::RunConfig cfg;
    dcp::Scenario sc;
    fs::path out;
};

RunContext prepare(const CommonCli& c) {
    RunContext ctx{build_config(c), {}, {}};
    ctx.sc = dcp::resolve_scenario(ctx.cfg);
    if (!ctx.cfg.k_explicit) ctx.cfg.dcp.k = ctx.sc.default_k;
    if (ctx.cfg.initial_conditions.empty()) {
        ctx.cfg.initial_conditions = ctx.sc.default_inits;
    }
    for (const Eigen::VectorXd& x0 : ctx.cfg.initial_conditions) {
        validate_init(ctx.sc, x0);
    }
    ctx.out = ctx.cfg.output_dir;
    fs::create_directories(ctx.out);
    return ctx;
}

dcp::ControlLaw make_law(const RunContext& ctx, const std::string& name) {
    if (name == "cbf_qp") return dcp::make_cbf_qp_law(ctx.sc);
    if (name == "penalty_qp") {
        return dcp::make_penalty_qp_law(ctx.sc, ctx.cfg.penalty);
    }
    return dcp::make_dcp_law(ctx.sc, ctx.cfg.dcp);
}

void report_rollout(const std::string& tag, const dcp::TrajectoryRecord& rec) {
    std::cout << tag << ": " << dcp::outcome_name(rec.outcome);
    if (!rec.states.empty()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), ", t_end %.3f, min h %.3e",
                      rec.t_end(), rec.min_h());
        std::cout << buf << ", final " << state_str(rec.states.back());
    }
    if (rec.equilibrium.size() > 0) {
        std::cout << ", equilibrium " << state_str(rec.equilibrium);
    }
    std::cout << "\n";
    if (rec.outcome == dcp::Outcome::Aborted) {
        std::cerr << tag << " aborted: " << rec.error << "\n";
    }
}

int cmd_simulate(RunContext& ctx) {
    if (ctx.cfg.controllers.empty()) {
        throw dcp::ConfigError("no controllers selected");
    }
    if (ctx.cfg.initial_conditions.empty()) {
        throw dcp::ConfigError("no initial conditions configured");
    }
    std::vector<dcp::TrajectoryRecord> records;
    std::vector<std::string> labels;
    bool aborted = false;
    for (const std::string& name : ctx.cfg.controllers) {
        const dcp::ControlLaw law = make_law(ctx, name);
        for (size_t i = 0; i < ctx.cfg.initial_conditions.size(); ++i) {
            dcp::TrajectoryRecord rec =
                dcp::integrate(ctx.sc, law, ctx.cfg.initial_conditions[i],
                               ctx.cfg.integrator);
            const std::string stem =
                ctx.sc.name + "_" + name + "_init" + std::to_string(i);
            dcp::write_trajectory_csv(ctx.out / (stem + ".csv"), rec);
            dcp::write_outcome_json(ctx.out / (stem + ".json"), rec);
            report_rollout(stem, rec);
            aborted = aborted || rec.outcome == dcp::Outcome::Aborted;
            labels.push_back(name + " from " +
                             state_str(ctx.cfg.initial_conditions[i]));
            records.push_back(std::move(rec));
        }
    }
    if (ctx.cfg.emit_svg) {
        const fs::path svg = ctx.out / (ctx.sc.name + "_trajectories.svg");
        dcp::write_trajectories_svg(svg, ctx.sc, records, labels);
        std::cout << "wrote " << svg.string() << "\n";
    }
    return aborted ? 2 : 0;
}

int cmd_ksweep(RunContext& ctx, const std::vector<double>& k_values,
               const Eigen::VectorXd& x0) {
    const fs::path summary_path = ctx.out / (ctx.sc.name + "_ksweep.csv");
    std::ofstream summary(summary_path);
    if (!summary) {
        throw dcp::Error("cannot open " + summary_path.string() +
                         " for writing");
    }
    summary << "k,outcome";
    for (int i = 1; i <= ctx.sc.sys.state_dim; ++i) {
        summary << ",x" << i << "_end";
    }
    summary << ",min_h\n";

    std::vector<dcp::TrajectoryRecord> records;
    std::vector<std::string> labels;
    bool aborted = false;
    char buf[64];
    for (const double k : k_values) {
        dcp::DcpControllerConfig dcfg = ctx.cfg.dcp;
        dcfg.k = k;
        dcp::TrajectoryRecord rec = dcp::integrate(
            ctx.sc, dcp::make_dcp_law(ctx.sc, dcfg), x0, ctx.cfg.integrator);

        std::snprintf(buf, sizeof(buf), "%.17g", k);
        summary << buf << ',' << dcp::outcome_name(rec.outcome);
        for (Eigen::Index i = 0; i < x0.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g",
                          rec.states.empty() ? x0(i) : rec.states.back()(i));
            summary << ',' << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.17g", rec.min_h());
        summary << ',' << buf << '\n';

        std::snprintf(buf, sizeof(buf), "%g", k);
        const std::string stem =
            ctx.sc.name + "_ksweep_k" + std::string(buf);
        dcp::write_trajectory_csv(ctx.out / (stem + ".csv"), rec);
        dcp::write_outcome_json(ctx.out / (stem + ".json"), rec);
        report_rollout("k = " + std::string(buf), rec);
        aborted = aborted || rec.outcome == dcp::Outcome::Aborted;
        labels.push_back("k = " + std::string(buf));
        records.push_back(std::move(rec));
    }
    std::cout << "wrote " << summary_path.string() << "\n";
    if (ctx.cfg.emit_svg) {
        const fs::path svg = ctx.out / (ctx.sc.name + "_ksweep.svg");
        dcp::write_trajectories_svg(svg, ctx.sc, records, labels);
        std::cout << "wrote " << svg.string() << "\n";
    }
    return aborted ? 2 : 0;
}

int cmd_analyze(RunContext& ctx, double nu, int n_samples,
                double alignment_tol) {
    const std::vector<Eigen::VectorXd> points =
        dcp::sample_boundary(ctx.sc.cbf, n_samples, ctx.sc.domain_min,
                             ctx.sc.domain_max, ctx.sc.boundary_seeds);
    const std::vector<dcp::BoundarySample> classified =
        dcp::classify_boundary(ctx.sc, ctx.cfg.dcp, points, nu,
                               alignment_tol);
    const dcp::KBoundResult bound = dcp::k_lower_bound(classified, nu);

    const fs::path csv_path = ctx.out / (ctx.sc.name + "_boundary.csv");
    std::ofstream csv(csv_path);
    if (!csv) {
        throw dcp::Error("cannot open " + csv_path.string() + " for writing");
    }
    csv << "x1,x2,h,Fu_norm,Gwp_norm,u_bar_h,parallel_residual,"
           "in_Omega,in_X,in_S,in_Q\n";
    int n_omega = 0, n_x = 0, n_s = 0, n_q = 0;
    char buf[64];
    for (const dcp::BoundarySample& s : classified) {
        const double cols[] = {s.x(0),         s.x(1),     s.h,
                               s.Fu.norm(),    s.Gwp.norm(), s.u_bar_h,
                               s.parallel_residual};
        for (size_t i = 0; i < 7; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", cols[i]);
            csv << (i ? "," : "") << buf;
        }
        csv << ',' << int(s.in_Omega) << ',' << int(s.in_X) << ','
            << int(s.in_S) << ',' << int(s.in_Q) << '\n';
        n_omega += s.in_Omega;
        n_x += s.in_X;
        n_s += s.in_S;
        n_q += s.in_Q;
    }
    std::cout << "wrote " << csv_path.string() << "\n";

    nlohmann::json j;
    j["scenario"] = ctx.sc.name;
    j["nu"] = bound.nu;
    j["n_samples"] = static_cast<int>(classified.size());
    j["count_omega"] = n_omega;
    j["count_x"] = n_x;
    j["count_s"] = n_s;
    j["count_q"] = n_q;
    j["sup_Fu_norm"] = bound.sup_Fu_norm;
    j["inf_Gwp_norm"] = bound.inf_Gwp_norm;
    j["k_lower_bound"] = bound.k_lower_bound;
    j["x_empty"] = bound.x_empty;
    const fs::path json_path = ctx.out / (ctx.sc.name + "_kbound.json");
    std::ofstream jf(json_path);
    jf << j.dump(2) << "\n";
    std::cout << "wrote " << json_path.string() << "\n";

    if (ctx.cfg.emit_svg) {
        const fs::path svg = ctx.out / (ctx.sc.name + "_boundary.svg");
        dcp::write_boundary_svg(svg, ctx.sc, classified);
        std::cout << "wrote " << svg.string() << "\n";
    }

    std::cout << ctx.sc.name << " boundary: " << classified.size()
              << " samples, |Omega| = " << n_omega << ", |X| = " << n_x
              << ", |S| = " << n_s << ", |Q| = " << n_q << "\n";
    if (bound.x_empty) {
        std::cout << "X empty at nu = " << nu
                  << ": any k >= 0 keeps the boundary clear\n";
    } else {
        std::snprintf(buf, sizeof(buf), "%.6g", bound.k_lower_bound);
        std::cout << "k lower bound at nu = " << nu << ": " << buf << "\n";
    }
    return 0;
}

std::vector<double> parse_k_values(const std::string& text) {
    std::vector<double> ks;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            size_t pos = 0;
            const double k = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            if (k < 0.0) {
                throw dcp::ConfigError("--k-values: gain must be >= 0");
            }
            ks.push_back(k);
        } catch (const std::invalid_argument&) {
            throw dcp::ConfigError("--k-values: not a number: '" + item +
                                   "'");
        } catch (const std::out_of_range&) {
            throw dcp::ConfigError("--k-values: out of range: '" + item +
                                   "'");
        }
    }
    if (ks.empty()) throw dcp::ConfigError("--k-values: empty list");
    return ks;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CLF-CBF complementarity control simulation toolkit"};
    app.require_subcommand(1);

    CommonCli sim_flags, sweep_flags, ana_flags;

    CLI::App* sim = app.add_subcommand(
        "simulate",
        "roll out each configured controller from each initial condition");
    add_common(sim, sim_flags);

    CLI::App* sweep = app.add_subcommand(
        "ksweep", "repeat one complementarity rollout across gains");
    add_common(sweep, sweep_flags);
    std::string k_values_text, x0_text;
    sweep->add_option("--k-values", k_values_text, "comma-separated gains")
        ->required();
    sweep->add_option("--x0", x0_text,
                      "start state, default: first configured initial "
                      "condition");

    CLI::App* ana = app.add_subcommand(
        "analyze", "sample and classify the safe-set boundary");
    add_common(ana, ana_flags);
    double nu = 0.5;
    int n_samples = 720;
    double alignment_tol = 1e-3;
    ana->add_option("--nu", nu, "activity threshold for Q membership");
    ana->add_option("--samples", n_samples, "boundary sample count");
    ana->add_option("--alignment-tol", alignment_tol,
                    "parallelism tolerance in radians");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            RunContext ctx = prepare(sim_flags);
            return cmd_simulate(ctx);
        }
        if (sweep->parsed()) {
            RunContext ctx = prepare(sweep_flags);
            const std::vector<double> ks = parse_k_values(k_values_text);
            Eigen::VectorXd x0;
            if (!x0_text.empty()) {
                const std::vector<Eigen::VectorXd> parsed =
                    dcp::parse_state_list(x0_text, "--x0");
                if (parsed.size() != 1) {
                    throw dcp::ConfigError("--x0 wants exactly one state");
                }
                x0 = parsed.front();
                validate_init(ctx.sc, x0);
            } else {
                if (ctx.cfg.initial_conditions.empty()) {
                    throw dcp::ConfigError(
                        "ksweep needs --x0 or a configured initial "
                        "condition");
                }
                x0 = ctx.cfg.initial_conditions.front();
            }
            return cmd_ksweep(ctx, ks, x0);
        }
        if (ana->parsed()) {
            RunContext ctx = prepare(ana_flags);
            if (!(nu > 0.0)) throw dcp::ConfigError("--nu must be positive");
            if (n_samples < 8) {
                throw dcp::ConfigError("--samples must be at least 8");
            }
            return cmd_analyze(ctx, nu, n_samples, alignment_tol);
        }
    } catch (const dcp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const dcp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
