#include <string>

#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/sim.hpp"

namespace shotlab::sim {

namespace {

const std::vector<std::string> kShotColumns = {
    "run_id",         "case_index",     "seed",           "time_s",          "shooter_side",
    "shooter_id",     "shooter_x",      "shooter_y",      "shooter_z",       "shooter_heading",
    "shooter_speed",  "target_id",      "target_x",       "target_y",        "target_z",
    "target_heading", "target_speed",   "distance_m",     "off_boresight_deg", "delta_heading_deg",
    "wez_rmax_m",     "outcome"};

const std::vector<std::string> kRunColumns = {
    "run_id",         "case_index",     "seed",          "blue_initial",       "red_initial",
    "blue_survivors", "red_survivors",  "missiles_fired_blue", "missiles_fired_red", "end_time_s"};

using csv::format_exact;

Side parse_side(const std::string& s) {
  if (s == "blue") return Side::Blue;
  if (s == "red") return Side::Red;
  throw ParseError("unknown side '" + s + "'");
}

Outcome parse_outcome(const std::string& s) {
  if (s == "KILL") return Outcome::Kill;
  if (s == "NO_KILL") return Outcome::NoKill;
  if (s == "PENDING") return Outcome::Pending;
  throw ParseError("unknown outcome '" + s + "'");
}

void check_header(const csv::Table& t, const std::vector<std::string>& expected,
                  const std::filesystem::path& path) {
  if (t.header != expected) throw ParseError(path.string() + ": unexpected header");
}

}  // namespace

void write_shots(const std::filesystem::path& path, std::span<const ShotEvent> events) {
  csv::Table t;
  t.header = kShotColumns;
  for (const auto& e : events) {
    t.rows.push_back({std::to_string(e.run_id), std::to_string(e.case_index), std::to_string(e.seed),
                      format_exact(e.time_s), std::string(to_string(e.shooter_side)),
                      std::to_string(e.shooter.id), format_exact(e.shooter.position.x),
                      format_exact(e.shooter.position.y), format_exact(e.shooter.position.z),
                      format_exact(e.shooter.heading_deg), format_exact(e.shooter.speed_mps),
                      std::to_string(e.target.id), format_exact(e.target.position.x),
                      format_exact(e.target.position.y), format_exact(e.target.position.z),
                      format_exact(e.target.heading_deg), format_exact(e.target.speed_mps),
                      format_exact(e.distance_m), format_exact(e.off_boresight_deg),
                      format_exact(e.delta_heading_deg), format_exact(e.wez_rmax_m),
                      std::string(to_string(e.outcome))});
  }
  csv::write(path, t);
}

std::vector<ShotEvent> read_shots(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  check_header(t, kShotColumns, path);
  std::vector<ShotEvent> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    ShotEvent e;
    std::size_t i = 0;
    e.run_id = csv::parse_uint64(r[i++]);
    e.case_index = csv::parse_uint64(r[i++]);
    e.seed = csv::parse_uint64(r[i++]);
    e.time_s = csv::parse_double(r[i++]);
    e.shooter_side = parse_side(r[i++]);
    auto read_snapshot = [&](Snapshot& s) {
      s.id = static_cast<int>(csv::parse_int(r[i++]));
      s.position.x = csv::parse_double(r[i++]);
      s.position.y = csv::parse_double(r[i++]);
      s.position.z = csv::parse_double(r[i++]);
      s.heading_deg = csv::parse_double(r[i++]);
      s.speed_mps = csv::parse_double(r[i++]);
    };
    read_snapshot(e.shooter);
    read_snapshot(e.target);
    e.distance_m = csv::parse_double(r[i++]);
    e.off_boresight_deg = csv::parse_double(r[i++]);
    e.delta_heading_deg = csv::parse_double(r[i++]);
    e.wez_rmax_m = csv::parse_double(r[i++]);
    e.outcome = parse_outcome(r[i++]);
    out.push_back(e);
  }
  return out;
}

void write_runs(const std::filesystem::path& path, std::span<const RunSummary> runs) {
  csv::Table t;
  t.header = kRunColumns;
  for (const auto& s : runs) {
    t.rows.push_back({std::to_string(s.run_id), std::to_string(s.case_index), std::to_string(s.seed),
                      std::to_string(s.blue_initial), std::to_string(s.red_initial),
                      std::to_string(s.blue_survivors), std::to_string(s.red_survivors),
                      std::to_string(s.missiles_fired_blue), std::to_string(s.missiles_fired_red),
                      format_exact(s.end_time_s)});
  }
  csv::write(path, t);
}

std::vector<RunSummary> read_runs(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  check_header(t, kRunColumns, path);
  std::vector<RunSummary> out;
  for (const auto& r : t.rows) {
    RunSummary s;
    s.run_id = csv::parse_uint64(r[0]);
    s.case_index = csv::parse_uint64(r[1]);
    s.seed = csv::parse_uint64(r[2]);
    s.blue_initial = static_cast<int>(csv::parse_int(r[3]));
    s.red_initial = static_cast<int>(csv::parse_int(r[4]));
    s.blue_survivors = static_cast<int>(csv::parse_int(r[5]));
    s.red_survivors = static_cast<int>(csv::parse_int(r[6]));
    s.missiles_fired_blue = static_cast<int>(csv::parse_int(r[7]));
    s.missiles_fired_red = static_cast<int>(csv::parse_int(r[8]));
    s.end_time_s = csv::parse_double(r[9]);
    out.push_back(s);
  }
  return out;
}

}  // namespace shotlab::sim
