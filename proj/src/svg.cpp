#include "dcp/svg.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "dcp/errors.hpp"

namespace dcp {

namespace {

constexpr double view = 760.0;
constexpr double margin = 40.0;

struct Mapper {
    double x0, y0, sx, sy;

    Mapper(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
        x0 = lo(0);
        y0 = lo(1);
        sx = view / (hi(0) - lo(0));
        sy = view / (hi(1) - lo(1));
    }
    // World y grows upward, svg y grows downward.
    double px(double wx) const { return margin + (wx - x0) * sx; }
    double py(double wy) const { return margin + view - (wy - y0) * sy; }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

const char* palette(size_t i) {
    static const char* colors[] = {"#d62728", "#ff7f0e", "#1f77b4",
                                   "#2ca02c", "#9467bd", "#8c564b",
                                   "#e377c2", "#17becf"};
    return colors[i % 8];
}

void open_svg(std::ofstream& out) {
    const double w = view + 2 * margin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << w << "\" viewBox=\"0 0 " << w << " " << w
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// Marching squares on a 400x400 cell grid: every cell edge whose endpoint
// values straddle zero contributes a linearly interpolated crossing; cells
// with two crossings emit one segment, saddle cells pair them in order.
void emit_level_set(std::ofstream& out, const Scenario& sc, const Mapper& map) {
    constexpr int cells = 400;
    const double dx = (sc.domain_max(0) - sc.domain_min(0)) / cells;
    const double dy = (sc.domain_max(1) - sc.domain_min(1)) / cells;

    std::vector<double> lower(cells + 1), upper(cells + 1);
    Eigen::Vector2d p;
    for (int i = 0; i <= cells; ++i) {
        p << sc.domain_min(0) + i * dx, sc.domain_min(1);
        lower[i] = sc.cbf.value(p);
    }
    out << "<g stroke=\"#555555\" stroke-width=\"1.5\" fill=\"none\">\n";
    for (int j = 0; j < cells; ++j) {
        const double y0 = sc.domain_min(1) + j * dy;
        const double y1 = y0 + dy;
        for (int i = 0; i <= cells; ++i) {
            p << sc.domain_min(0) + i * dx, y1;
            upper[i] = sc.cbf.value(p);
        }
        for (int i = 0; i < cells; ++i) {
            const double x0 = sc.domain_min(0) + i * dx;
            const double x1 = x0 + dx;
            const double v00 = lower[i], v10 = lower[i + 1];
            const double v01 = upper[i], v11 = upper[i + 1];
            double cx[4], cy[4];
            int nc = 0;
            auto cross = [&](double va, double vb, double xa, double ya,
                             double xb, double yb) {
                if ((va < 0.0) == (vb < 0.0)) return;
                const double t = va / (va - vb);
                cx[nc] = xa + t * (xb - xa);
                cy[nc] = ya + t * (yb - ya);
                ++nc;
            };
            cross(v00, v10, x0, y0, x1, y0);
            cross(v10, v11, x1, y0, x1, y1);
            cross(v11, v01, x1, y1, x0, y1);
            cross(v01, v00, x0, y1, x0, y0);
            for (int s = 0; s + 1 < nc; s += 2) {
                out << "<line x1=\"" << num(map.px(cx[s])) << "\" y1=\""
                    << num(map.py(cy[s])) << "\" x2=\"" << num(map.px(cx[s + 1]))
                    << "\" y2=\"" << num(map.py(cy[s + 1])) << "\"/>\n";
            }
        }
        std::swap(lower, upper);
    }
    out << "</g>\n";
}

void emit_marker(std::ofstream& out, const Mapper& map, double wx, double wy,
                 const char* fill, double r) {
    out << "<circle cx=\"" << num(map.px(wx)) << "\" cy=\"" << num(map.py(wy))
        << "\" r=\"" << r << "\" fill=\"" << fill << "\"/>\n";
}

}  // namespace

void write_trajectories_svg(const std::filesystem::path& path,
                            const Scenario& sc,
                            const std::vector<TrajectoryRecord>& records,
                            const std::vector<std::string>& labels) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    const Mapper map(sc.domain_min, sc.domain_max);

    open_svg(out);
    emit_level_set(out, sc, map);

    for (size_t r = 0; r < records.size(); ++r) {
        const TrajectoryRecord& rec = records[r];
        if (rec.states.empty()) continue;
        const size_t stride = std::max<size_t>(1, rec.states.size() / 1500);
        out << "<polyline fill=\"none\" stroke=\"" << palette(r)
            << "\" stroke-width=\"1.2\" points=\"";
        for (size_t i = 0; i < rec.states.size(); i += stride) {
            out << num(map.px(rec.states[i](0))) << ','
                << num(map.py(rec.states[i](1))) << ' ';
        }
        out << num(map.px(rec.states.back()(0))) << ','
            << num(map.py(rec.states.back()(1))) << "\"/>\n";
        emit_marker(out, map, rec.states.front()(0), rec.states.front()(1),
                    palette(r), 4.0);
        if (rec.equilibrium.size() > 0) {
            const double x = map.px(rec.equilibrium(0));
            const double y = map.py(rec.equilibrium(1));
            out << "<path d=\"M" << num(x - 5) << ' ' << num(y) << " L"
                << num(x + 5) << ' ' << num(y) << " M" << num(x) << ' '
                << num(y - 5) << " L" << num(x) << ' ' << num(y + 5)
                << "\" stroke=\"" << palette(r) << "\" stroke-width=\"2\"/>\n";
        }
    }
    emit_marker(out, map, 0.0, 0.0, "black", 3.5);

    double ly = margin + 6.0;
    for (size_t r = 0; r < records.size() && r < labels.size(); ++r) {
        out << "<text x=\"" << num(margin + 6.0) << "\" y=\"" << num(ly + 10.0)
            << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\""
            << palette(r) << "\">" << labels[r] << " ("
            << outcome_name(records[r].outcome) << ")</text>\n";
        ly += 16.0;
    }
    out << "</svg>\n";
}

void write_boundary_svg(const std::filesystem::path& path, const Scenario& sc,
                        const std::vector<BoundarySample>& samples) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    const Mapper map(sc.domain_min, sc.domain_max);

    open_svg(out);
    emit_level_set(out, sc, map);
    for (const BoundarySample& s : samples) {
        const char* fill = "#bbbbbb";
        if (s.in_Q) {
            fill = "#d62728";
        } else if (s.in_X) {
            fill = "#ff7f0e";
        } else if (s.in_S) {
            fill = "#9467bd";
        } else if (s.in_Omega) {
            fill = "#bcbd22";
        }
        emit_marker(out, map, s.x(0), s.x(1), fill, 2.5);
    }
    const char* legend[] = {"Q #d62728", "X \\ Q #ff7f0e", "S #9467bd",
                            "Omega \\ X #bcbd22", "rest #bbbbbb"};
    double ly = margin + 6.0;
    for (const char* row : legend) {
        out << "<text x=\"" << num(margin + 6.0) << "\" y=\"" << num(ly + 10.0)
            << "\" font-family=\"sans-serif\" font-size=\"13\">" << row
            << "</text>\n";
        ly += 16.0;
    }
    out << "</svg>\n";
}

}  // namespace dcp
