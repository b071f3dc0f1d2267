#pragma once

// CSV / JSON emission for trajectories and small result tables. Numbers are
// printed in the shortest form that round-trips to the same double.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "solgeom/flow.hpp"

namespace solgeom {

enum class OutputFormat { Csv, Json };

std::string format_number(double v);

inline constexpr const char* kTrajectoryCsvHeader = "t,x,y,z,zdot,res_speed,res_grayson";

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

// {"meta": {a, b, c, k, h, class, tol}, "samples": [{t, x, y, z, zdot, res_speed, res_grayson}, ...]}
void write_trajectory_json(const Trajectory& traj, std::ostream& out);

void write_trajectory(const Trajectory& traj, OutputFormat format, std::ostream& out);

// Inverse of write_trajectory_json: meta and the seven emitted sample fields.
Trajectory read_trajectory_json(const std::string& text);

// Empty cells print as nothing in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// CSV with a header line, or a JSON array of objects keyed by column.
void write_table(const Table& table, OutputFormat format, std::ostream& out);

}  // namespace solgeom
