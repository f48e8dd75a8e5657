#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dcp/analysis.hpp"
#include "dcp/scenario.hpp"
#include "dcp/simulate.hpp"

namespace dcp {

// Self-contained picture of rollouts over the scenario: h = 0 level set,
// one polyline per record, start/end markers, reported equilibria, origin.
void write_trajectories_svg(const std::filesystem::path& path,
                            const Scenario& sc,
                            const std::vector<TrajectoryRecord>& records,
                            const std::vector<std::string>& labels);

// Boundary samples colored by membership (Q over X over S over Omega).
void write_boundary_svg(const std::filesystem::path& path, const Scenario& sc,
                        const std::vector<BoundarySample>& samples);

}  // namespace dcp
