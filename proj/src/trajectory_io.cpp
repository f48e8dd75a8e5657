#include "dcp/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcp/errors.hpp"

namespace dcp {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryRecord& record) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");

    const size_t rows = record.times.size();
    const Eigen::Index n = rows ? record.states[0].size() : 0;
    const Eigen::Index m = rows ? record.inputs[0].size() : 0;

    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) out << ",x" << (i + 1);
    for (Eigen::Index i = 0; i < m; ++i) out << ",u" << (i + 1);
    out << ",h,V,u_bar_l,u_bar_h\n";

    for (size_t r = 0; r < rows; ++r) {
        out << fmt(record.times[r]);
        for (Eigen::Index i = 0; i < n; ++i)
            out << ',' << fmt(record.states[r](i));
        for (Eigen::Index i = 0; i < m; ++i)
            out << ',' << fmt(record.inputs[r](i));
        out << ',' << fmt(record.h_values[r]) << ',' << fmt(record.v_values[r])
            << ',' << fmt(record.u_bar_l[r]) << ',' << fmt(record.u_bar_h[r])
            << '\n';
    }
}

TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());

    std::string header;
    if (!std::getline(in, header)) throw Error("empty csv " + path.string());
    const std::vector<std::string> cols = split(header, ',');
    int n = 0, m = 0;
    for (const std::string& c : cols) {
        if (c.size() > 1 && c[0] == 'x') ++n;
        if (c.size() > 1 && c[0] == 'u' && c[1] != '_') ++m;
    }
    const size_t expected = 1 + n + m + 4;
    if (cols.size() != expected || cols[0] != "t") {
        throw Error("unrecognized trajectory header in " + path.string());
    }

    TrajectoryRecord rec;
    std::string line;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> parts = split(line, ',');
        if (parts.size() != expected) {
            throw Error(path.string() + ":" + std::to_string(lineno) +
                        ": wrong column count");
        }
        size_t p = 0;
        auto next = [&] { return std::stod(parts[p++]); };
        rec.times.push_back(next());
        Eigen::VectorXd x(n), u(m);
        for (int i = 0; i < n; ++i) x(i) = next();
        for (int i = 0; i < m; ++i) u(i) = next();
        rec.states.push_back(std::move(x));
        rec.inputs.push_back(std::move(u));
        rec.h_values.push_back(next());
        rec.v_values.push_back(next());
        rec.u_bar_l.push_back(next());
        rec.u_bar_h.push_back(next());
    }
    return rec;
}

void write_outcome_json(const std::filesystem::path& path,
                        const TrajectoryRecord& record) {
    nlohmann::json j;
    j["outcome"] = outcome_name(record.outcome);
    j["steps"] = record.times.size();
    j["t_end"] = record.t_end();
    if (!record.states.empty()) {
        j["min_h"] = record.min_h();
        const Eigen::VectorXd& xf = record.states.back();
        j["final_state"] = std::vector<double>(xf.data(), xf.data() + xf.size());
    }
    if (record.equilibrium.size() > 0) {
        j["equilibrium"] = std::vector<double>(
            record.equilibrium.data(),
            record.equilibrium.data() + record.equilibrium.size());
    }
    if (!record.error.empty()) j["error"] = record.error;

    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

}  // namespace dcp
