#include "dcp/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "dcp/errors.hpp"

namespace dcp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_trim(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& v, const std::string& where) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + v + "'");
    }
}

int parse_int(const std::string& v, const std::string& where) {
    try {
        size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not an integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(where + ": not a boolean: '" + v + "'");
}

// "a,b;c,d" row-major into a matrix; every row must have equal width.
MatrixXd parse_matrix(const std::string& text, const std::string& where) {
    const std::vector<std::string> rows = split_trim(text, ';');
    if (rows.empty()) throw ConfigError(where + ": empty matrix");
    std::vector<std::vector<double>> vals;
    for (const std::string& r : rows) {
        const std::vector<std::string> cells = split_trim(r, ',');
        std::vector<double> row;
        for (const std::string& c : cells) row.push_back(parse_double(c, where));
        if (!vals.empty() && row.size() != vals.front().size()) {
            throw ConfigError(where + ": ragged matrix rows");
        }
        vals.push_back(std::move(row));
    }
    MatrixXd m(vals.size(), vals.front().size());
    for (size_t i = 0; i < vals.size(); ++i)
        for (size_t j = 0; j < vals[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                vals[i][j];
    return m;
}

ClassKFunction parse_alpha(const std::string& v, ClassKFunction::Kind kind,
                           const std::string& where) {
    if (v == "identity") return identity_class_k(kind);
    if (v.rfind("linear:", 0) == 0) {
        const double lambda = parse_double(v.substr(7), where);
        if (!(lambda > 0.0)) {
            throw ConfigError(where + ": class-K slope must be positive");
        }
        return linear_class_k(lambda, kind);
    }
    throw ConfigError(where + ": unknown class-K spec '" + v +
                      "' (want identity or linear:<slope>)");
}

}  // namespace

std::vector<Eigen::VectorXd> parse_state_list(const std::string& text,
                                              const std::string& where) {
    std::vector<VectorXd> out;
    for (const std::string& s : split_trim(text, ';')) {
        const std::vector<std::string> cells = split_trim(s, ',');
        if (cells.empty()) continue;
        VectorXd x(cells.size());
        for (size_t i = 0; i < cells.size(); ++i) {
            x(static_cast<Eigen::Index>(i)) = parse_double(cells[i], where);
        }
        out.push_back(std::move(x));
    }
    return out;
}

void apply_config_key(RunConfig& cfg, const std::string& section,
                      const std::string& key, const std::string& value,
                      const std::string& where) {
    if (section == "run" || section.empty()) {
        if (key == "scenario") {
            if (value != "case1" && value != "case2" && value != "custom") {
                throw ConfigError(where + ": unknown scenario '" + value + "'");
            }
            cfg.scenario = value;
            cfg.scenario_explicit = true;
        } else if (key == "controllers") {
            cfg.controllers = split_trim(value, ',');
            for (const std::string& c : cfg.controllers) {
                if (c != "cbf_qp" && c != "penalty_qp" && c != "dcp") {
                    throw ConfigError(where + ": unknown controller '" + c +
                                      "'");
                }
            }
        } else if (key == "initial_conditions") {
            cfg.initial_conditions = parse_state_list(value, where);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "emit_svg") {
            cfg.emit_svg = parse_bool(value, where);
        } else if (key == "penalty") {
            cfg.penalty = parse_double(value, where);
            if (!(cfg.penalty > 0.0)) {
                throw ConfigError(where + ": penalty must be positive");
            }
        } else if (key == "seed") {
            cfg.seed = static_cast<unsigned>(parse_int(value, where));
        } else {
            throw ConfigError(where + ": unknown key '" + key +
                              "' in [run]");
        }
        return;
    }
    if (section == "dcp") {
        if (key == "k") {
            cfg.dcp.k = parse_double(value, where);
            if (cfg.dcp.k < 0.0) {
                throw ConfigError(where + ": gain k must be >= 0");
            }
            cfg.k_explicit = true;
        } else if (key == "wp_sign") {
            const int s = parse_int(value, where);
            if (s != 1 && s != -1) {
                throw ConfigError(where + ": wp_sign must be 1 or -1");
            }
            cfg.dcp.wp_sign = s;
        } else if (key == "wh_mode") {
            if (value == "nullspace") {
                cfg.dcp.wh_mode = WhMode::NullSpaceModified;
            } else if (value == "naive") {
                cfg.dcp.wh_mode = WhMode::Naive;
            } else {
                throw ConfigError(where + ": wh_mode is nullspace or naive");
            }
        } else {
            throw ConfigError(where + ": unknown key '" + key + "' in [dcp]");
        }
        return;
    }
    if (section == "integrator") {
        if (key == "dt") {
            cfg.integrator.dt = parse_double(value, where);
        } else if (key == "t_max") {
            cfg.integrator.t_max = parse_double(value, where);
        } else if (key == "origin_tol") {
            cfg.integrator.origin_tol = parse_double(value, where);
        } else if (key == "equilibrium_speed_tol") {
            cfg.integrator.equilibrium_speed_tol = parse_double(value, where);
        } else if (key == "equilibrium_dwell_steps") {
            cfg.integrator.equilibrium_dwell_steps = parse_int(value, where);
        } else {
            throw ConfigError(where + ": unknown key '" + key +
                              "' in [integrator]");
        }
        return;
    }
    if (section == "scenario") {
        static const char* known[] = {"drift",   "input",          "h_poly",
                                      "v_quad",  "alpha_l",        "alpha_h",
                                      "domain",  "boundary_seeds", "default_k",
                                      "input_rank"};
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) ==
            std::end(known)) {
            throw ConfigError(where + ": unknown key '" + key +
                              "' in [scenario]");
        }
        cfg.custom[key] = value;
        return;
    }
    throw ConfigError(where + ": unknown section [" + section + "]");
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());

    RunConfig cfg;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(where + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected key = value");
        }
        apply_config_key(cfg, section, trim(line.substr(0, eq)),
                         trim(line.substr(eq + 1)), where);
    }
    return cfg;
}

Scenario resolve_scenario(const RunConfig& cfg) {
    // A [scenario] section that nothing selects is a mistake, not a default.
    if (!cfg.scenario_explicit && !cfg.custom.empty()) {
        throw ConfigError(
            "config has a [scenario] section but never selects it; "
            "set scenario = custom to use it");
    }
    if (cfg.scenario == "case1") return make_case1_scenario();
    if (cfg.scenario == "case2") return make_case2_scenario();

    auto need = [&](const std::string& key) -> const std::string& {
        auto it = cfg.custom.find(key);
        if (it == cfg.custom.end()) {
            throw ConfigError("custom scenario needs [scenario] key '" + key +
                              "'");
        }
        return it->second;
    };

    Scenario sc;
    sc.name = "custom";

    const MatrixXd a = parse_matrix(need("drift"), "[scenario] drift");
    if (a.rows() != a.cols()) {
        throw ConfigError("[scenario] drift matrix must be square");
    }
    const int n = static_cast<int>(a.rows());
    MatrixXd g = MatrixXd::Identity(n, n);
    if (auto it = cfg.custom.find("input"); it != cfg.custom.end()) {
        g = parse_matrix(it->second, "[scenario] input");
        if (g.rows() != n) {
            throw ConfigError("[scenario] input matrix row count mismatch");
        }
    }
    int rank = static_cast<int>(std::min(g.rows(), g.cols()));
    if (auto it = cfg.custom.find("input_rank"); it != cfg.custom.end()) {
        rank = parse_int(it->second, "[scenario] input_rank");
    }
    sc.sys = make_system(
        n, static_cast<int>(g.cols()), rank,
        [a](const VectorXd& x) -> VectorXd { return a * x; },
        [g](const VectorXd&) { return g; });

    const MatrixXd p = parse_matrix(need("v_quad"), "[scenario] v_quad");
    if (p.rows() != n || p.cols() != n) {
        throw ConfigError("[scenario] v_quad must be " + std::to_string(n) +
                          "x" + std::to_string(n));
    }
    sc.clf = quadratic_clf(
        p, parse_alpha(cfg.custom.count("alpha_l") ? cfg.custom.at("alpha_l")
                                                   : "identity",
                       ClassKFunction::Kind::ClassK, "[scenario] alpha_l"));

    if (n != 2) {
        throw ConfigError("custom barriers are planar (h_poly is bivariate)");
    }
    std::vector<PolyTerm> terms;
    for (const std::string& t :
         split_trim(need("h_poly"), ';')) {
        const std::vector<std::string> f = split_trim(t, ':');
        if (f.size() != 3) {
            throw ConfigError("[scenario] h_poly term '" + t +
                              "' is not i:j:coef");
        }
        terms.push_back({parse_int(f[0], "[scenario] h_poly"),
                         parse_int(f[1], "[scenario] h_poly"),
                         parse_double(f[2], "[scenario] h_poly")});
    }
    sc.cbf = polynomial_cbf(
        std::move(terms),
        parse_alpha(cfg.custom.count("alpha_h") ? cfg.custom.at("alpha_h")
                                                : "identity",
                    ClassKFunction::Kind::Extended, "[scenario] alpha_h"));

    sc.domain_min = VectorXd::Constant(n, -10.0);
    sc.domain_max = VectorXd::Constant(n, 10.0);
    if (auto it = cfg.custom.find("domain"); it != cfg.custom.end()) {
        const std::vector<VectorXd> corners =
            parse_state_list(it->second, "[scenario] domain");
        if (corners.size() != 2 || corners[0].size() != n) {
            throw ConfigError("[scenario] domain wants 'lo1,lo2;hi1,hi2'");
        }
        sc.domain_min = corners[0];
        sc.domain_max = corners[1];
    }
    if (auto it = cfg.custom.find("boundary_seeds"); it != cfg.custom.end()) {
        sc.boundary_seeds =
            parse_state_list(it->second, "[scenario] boundary_seeds");
    }
    if (auto it = cfg.custom.find("default_k"); it != cfg.custom.end()) {
        sc.default_k = parse_double(it->second, "[scenario] default_k");
    }
    return sc;
}

}  // namespace dcp
