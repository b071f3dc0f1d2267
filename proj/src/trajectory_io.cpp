#include "solgeom/trajectory_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "solgeom/errors.hpp"

namespace solgeom {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<V, double>) {
          return number_or_null(v);
        } else {
          return v;
        }
      },
      c);
}

std::string cell_csv(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<V, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<V, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      c);
}

void check_stream(std::ostream& out) {
  out.flush();
  if (!out) throw std::ios_base::failure("write to output sink failed");
}

GeodesicClass class_from_string(const std::string& s) {
  if (s == "vertical") return GeodesicClass::Vertical;
  if (s == "horizontal") return GeodesicClass::Horizontal;
  if (s == "hyperbolic") return GeodesicClass::Hyperbolic;
  if (s == "generic") return GeodesicClass::Generic;
  throw DomainError("unknown geodesic class '" + s + "'");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << kTrajectoryCsvHeader << '\n';
  for (const Sample& s : traj.samples) {
    out << format_number(s.t) << ',' << format_number(s.x) << ',' << format_number(s.y) << ','
        << format_number(s.z) << ',' << format_number(s.zdot) << ',' << format_number(s.res_speed) << ','
        << format_number(s.res_grayson) << '\n';
  }
  check_stream(out);
}

void write_trajectory_json(const Trajectory& traj, std::ostream& out) {
  const GeodesicSpec& spec = traj.spec;
  ordered_json doc;
  doc["meta"] = {{"a", spec.constants.a},
                 {"b", spec.constants.b},
                 {"c", spec.constants.c},
                 {"k", spec.k},
                 {"h", spec.h ? ordered_json(*spec.h) : ordered_json(nullptr)},
                 {"class", to_string(spec.kind)},
                 {"tol", traj.tol}};
  ordered_json samples = ordered_json::array();
  for (const Sample& s : traj.samples) {
    samples.push_back({{"t", s.t},
                       {"x", s.x},
                       {"y", s.y},
                       {"z", s.z},
                       {"zdot", s.zdot},
                       {"res_speed", s.res_speed},
                       {"res_grayson", s.res_grayson}});
  }
  doc["samples"] = std::move(samples);
  out << doc.dump(2) << '\n';
  check_stream(out);
}

void write_trajectory(const Trajectory& traj, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    write_trajectory_csv(traj, out);
  } else {
    write_trajectory_json(traj, out);
  }
}

Trajectory read_trajectory_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  Trajectory traj;
  const auto& meta = doc.at("meta");
  traj.spec.constants = {meta.at("a").get<double>(), meta.at("b").get<double>(), meta.at("c").get<double>()};
  traj.spec.k = meta.at("k").get<double>();
  if (!meta.at("h").is_null()) traj.spec.h = meta.at("h").get<double>();
  traj.spec.kind = class_from_string(meta.at("class").get<std::string>());
  traj.tol = meta.at("tol").get<double>();
  for (const auto& row : doc.at("samples")) {
    Sample s;
    s.t = row.at("t").get<double>();
    s.x = row.at("x").get<double>();
    s.y = row.at("y").get<double>();
    s.z = row.at("z").get<double>();
    s.zdot = row.at("zdot").get<double>();
    s.res_speed = row.at("res_speed").get<double>();
    s.res_grayson = row.at("res_grayson").get<double>();
    traj.samples.push_back(s);
  }
  return traj;
}

void write_table(const Table& table, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_csv(row[i]);
      out << '\n';
    }
  } else {
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
      ordered_json obj = ordered_json::object();
      for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
      rows.push_back(std::move(obj));
    }
    out << rows.dump(2) << '\n';
  }
  check_stream(out);
}

}  // namespace solgeom
