#pragma once

#include <filesystem>

#include "dcp/simulate.hpp"

namespace dcp {

// Columns: t, x1..xn, u1..um, h, V, u_bar_l, u_bar_h; one header row; values
// printed with enough digits to round-trip doubles exactly.
void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryRecord& record);

// Inverse of write_trajectory_csv for the numeric columns; outcome and
// annotations live in the sidecar and are not restored.
TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path);

// Outcome sidecar: outcome name, final state, dwell-window equilibrium when
// present, min h, end time, step count, error annotation when aborted.
void write_outcome_json(const std::filesystem::path& path,
                        const TrajectoryRecord& record);

}  // namespace dcp
