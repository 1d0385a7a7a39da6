#pragma once

// Output artifacts: trajectory CSV, plan / graph / benchmark JSON.

#include <filesystem>
#include <string>
#include <vector>

#include "firesquad/planner.hpp"
#include "firesquad/room_graph.hpp"
#include "firesquad/simulation.hpp"

namespace firesquad {

inline constexpr const char *kTrajectoryHeader = "t,squad_id,agent_id,x,y,theta,vx,vy,omega";

// One row per report step and agent, fixed six-decimal formatting.
std::string trajectory_csv(const Trajectory &trajectory);

std::string plan_json(const std::vector<SquadPlan> &plans);
std::string graph_json(const RoomGraph &rooms);
std::string bench_json(const BenchReport &report, const std::string &scenario_name);
// Run outcome without wall-clock timings, so identical runs give identical files.
std::string summary_json(const Trajectory &trajectory);

// Writes the whole string, creating parent directories. Throws InputError on failure.
void write_file(const std::filesystem::path &path, const std::string &content);

}  // namespace firesquad
