#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "shotlab/doe.hpp"
#include "shotlab/rng.hpp"

// Constructive BVR engagement model: two line-abreast formations flying CAP
// racetracks, radar detection scaled by target RCS, WEZ-based shot decisions
// and point-mass missile flyouts with proportional navigation.
namespace shotlab::sim {

struct Vec3 {
  double x = 0.0;  // east
  double y = 0.0;  // north
  double z = 0.0;  // up

  Vec3& operator+=(const Vec3& o) noexcept { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) noexcept { x -= o.x; y -= o.y; z -= o.z; return *this; }
  friend Vec3 operator+(Vec3 a, const Vec3& b) noexcept { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) noexcept { return a -= b; }
  friend Vec3 operator*(Vec3 a, double s) noexcept { return {a.x * s, a.y * s, a.z * s}; }
  friend Vec3 operator*(double s, Vec3 a) noexcept { return a * s; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }

enum class Side { Blue, Red };
enum class Behavior { Cap, Commit, Engage, Evade };
enum class Guidance { Supported, Active, Dumb };
enum class Outcome { Pending, Kill, NoKill };

std::string_view to_string(Side side);
std::string_view to_string(Behavior behavior);
std::string_view to_string(Guidance guidance);
std::string_view to_string(Outcome outcome);

/// Static airframe and loadout data per aircraft type.
struct PlatformSpec {
  Side side = Side::Red;
  int aircraft_type = 0;  // 0 for red, 1 or 2 for blue
  int missile_count = 0;
  double baseline_rcs_db = -10.0;
  double max_turn_rate_dps = 12.0;
  double max_mach = 1.1;

  static PlatformSpec red();
  static PlatformSpec blue(int aircraft_type);
};

/// Heading in degrees true (0 = north, clockwise) to a unit vector.
Vec3 heading_vector(double heading_deg) noexcept;
/// Bearing in degrees true of `to` seen from `from`, in [0, 360).
double bearing_deg(const Vec3& from, const Vec3& to) noexcept;
/// Wraps to [0, 360).
double wrap_360(double deg) noexcept;
/// Wraps to [-180, 180).
double wrap_180(double deg) noexcept;

struct AircraftState {
  int id = 0;
  Side side = Side::Blue;
  Vec3 position;
  double heading_deg = 0.0;
  double speed_mps = 0.0;
  double vertical_speed_mps = 0.0;
  bool alive = true;
  int missiles_left = 0;
  Behavior behavior = Behavior::Cap;
  std::optional<int> committed_target;

  // Autopilot commands held between behavior evaluations.
  double cmd_heading_deg = 0.0;
  double cmd_speed_mps = 0.0;
  double cmd_altitude_m = 0.0;
  double cmd_path_angle_deg = 5.0;  // climb/dive limit for altitude changes
  double next_eval_s = 0.0;

  // CAP racetrack: waypoints are fixed at spawn.
  Vec3 cap_front;
  Vec3 cap_rear;
  bool cap_inbound = true;

  Vec3 prev_position;  // position at the start of the current tick
  Vec3 prev_velocity;  // velocity at the start of the current tick

  Vec3 velocity() const noexcept {
    Vec3 v = heading_vector(heading_deg) * speed_mps;
    v.z = vertical_speed_mps;
    return v;
  }
};

struct MissileState {
  int id = 0;
  int shooter_id = 0;
  int target_id = 0;
  Side side = Side::Blue;
  Vec3 position;
  Vec3 direction;  // unit vector of flight
  double speed_mps = 0.0;
  Guidance guidance = Guidance::Supported;
  double time_of_flight_s = 0.0;
  double activation_distance_m = 0.0;
  double opening_time_s = 0.0;  // continuous time with range increasing
  double last_range_m = 0.0;
  double closest_approach_m = 0.0;
  std::size_t event_index = 0;
  Outcome outcome = Outcome::Pending;

  Vec3 velocity() const noexcept { return direction * speed_mps; }
};

/// Kinematic snapshot stored with each launch.
struct Snapshot {
  int id = 0;
  Vec3 position;
  double heading_deg = 0.0;
  double speed_mps = 0.0;
  double altitude_m() const noexcept { return position.z; }
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct ShotEvent {
  std::uint64_t run_id = 0;
  std::size_t case_index = 0;
  std::uint64_t seed = 0;
  double time_s = 0.0;
  Side shooter_side = Side::Blue;
  Snapshot shooter;
  Snapshot target;
  double distance_m = 0.0;
  double off_boresight_deg = 0.0;
  double delta_heading_deg = 0.0;
  double wez_rmax_m = 0.0;
  Outcome outcome = Outcome::Pending;

  friend bool operator==(const ShotEvent&, const ShotEvent&) = default;
};

struct RunSummary {
  std::uint64_t run_id = 0;
  std::size_t case_index = 0;
  std::uint64_t seed = 0;
  int blue_initial = 0;
  int red_initial = 0;
  int blue_survivors = 0;
  int red_survivors = 0;
  int missiles_fired_blue = 0;
  int missiles_fired_red = 0;
  double end_time_s = 0.0;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

/// Per-side weapon, sensor and flight settings derived from the case.
struct SideSettings {
  double track_range_m = 250000.0;
  double rcs_db = -10.0;  // total RCS of this side's aircraft as seen by the enemy
  double activation_distance_m = 20000.0;
  double range_factor = 1.0;
  double shot_philosophy_pct = 60.0;
  double maneuver_altitude_m = 10000.0;
  double maneuver_mach = 0.9;
  double cap_mach = 0.7;
  PlatformSpec platform;
};

/// Scenario constants that are not part of the design space.
struct ScenarioConfig {
  double dt_s = 0.1;
  double max_time_s = 1800.0;
  double cap_separation_m = 150000.0;
  double cap_leg_m = 40000.0;
  double meters_per_degree = 111320.0;
  double red_track_range_m = 250000.0;
  double red_activation_distance_m = 20000.0;
  double red_range_factor = 1.0;
  double red_shot_philosophy_pct = 60.0;
};

struct WorldState {
  double time_s = 0.0;
  ScenarioConfig config;
  SideSettings blue;
  SideSettings red;
  std::vector<AircraftState> aircraft;  // indexed by id
  std::vector<MissileState> missiles;   // in-flight and resolved, indexed by id
  std::vector<ShotEvent> events;
  std::uint64_t run_id = 0;
  std::size_t case_index = 0;
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;

  const SideSettings& settings(Side side) const noexcept {
    return side == Side::Blue ? blue : red;
  }
  const AircraftState& aircraft_by_id(int id) const { return aircraft.at(static_cast<std::size_t>(id)); }
};

// --- physics and sensing -------------------------------------------------

/// ISA speed of sound [m/s]; throws DomainError outside [0, 20000] m.
double speed_of_sound(double altitude_m);

inline constexpr double kWezBaseRange = 25000.0;

/// Maximum WEZ range of `shooter` against `target` [m]. Throws GeometryError
/// when the aircraft are coincident.
double wez_max_range(const AircraftState& shooter, const AircraftState& target, double range_factor);

/// Radar range against a target of RCS `target_rcs_db`, fourth-root scaled
/// from the -10 dBm^2 reference.
double effective_detection_range(double radar_range_m, double target_rcs_db);

inline constexpr double kScanFraction = 0.6;
inline constexpr double kMissileWarningRange = 20000.0;

struct Contact {
  int id = 0;
  double range_m = 0.0;
};

struct Tracklist {
  std::vector<Contact> contacts;  // ascending by range, ties by id
  bool missile_warning = false;
  std::optional<int> threat_missile;  // nearest ACTIVE missile inside the warning range

  bool contains(int id) const noexcept;
};

Tracklist sense(const WorldState& world, const AircraftState& agent);

// --- behavior ------------------------------------------------------------

struct Action {
  Behavior behavior = Behavior::Cap;
  std::optional<int> committed_target;
  double heading_deg = 0.0;
  double speed_mps = 0.0;
  double altitude_m = 0.0;
  double path_angle_deg = 5.0;
  std::optional<int> fire_at;
  bool switch_cap_leg = false;
};

inline constexpr double kEvadeDiveDeg = 10.0;
inline constexpr double kMinAltitude = 500.0;

/// One behavior evaluation of `agent`. Pure: the caller applies the action.
/// The generator is accepted for interface stability; behaviors themselves
/// are deterministic and the evaluation delay is drawn by the caller.
Action behavior_step(const AircraftState& agent, const WorldState& world, CounterRng& rng);

/// Uniform delay until the next behavior evaluation.
double next_evaluation_delay(CounterRng& rng);

/// Shot decision: within the shot-philosophy fraction of Rmax and no
/// friendly missile already in flight against the target.
bool fire_decision(const AircraftState& agent, const AircraftState& target, const WorldState& world);

/// Moves one aircraft by dt toward its autopilot commands.
void advance_aircraft(AircraftState& aircraft, const PlatformSpec& platform, double dt);

// --- missiles --------------------------------------------------------------

inline constexpr double kBoostSpeed = 1000.0;
inline constexpr double kBoostTime = 8.0;
inline constexpr double kDragConstant = 0.02;
inline constexpr double kMaxLateralAccel = 30.0 * 9.80665;
inline constexpr double kNavigationGain = 4.0;
inline constexpr double kMaxFlightTime = 180.0;
inline constexpr double kLethalRadius = 10.0;
inline constexpr double kProbabilityOfKill = 0.9;
inline constexpr double kTrackConeDeg = 60.0;
inline constexpr double kOpeningTimeout = 2.0;
inline constexpr int kFlyoutSubsteps = 10;
inline constexpr double kLeadSpeed = 800.0;  // average missile speed assumed for launch lead

/// Unit launch direction toward the constant-velocity intercept point, or
/// along the line of sight when no intercept exists.
Vec3 lead_direction(const Vec3& shooter_pos, const Vec3& target_pos, const Vec3& target_vel);

enum class MissileStep { InFlight, Kill, Miss };

/// Minimum distance between two points moving linearly over one step, given
/// their relative position at the start and the end of the step.
double closest_approach(const Vec3& relative_start, const Vec3& relative_end) noexcept;

/// Endgame draw: true (KILL) with probability kProbabilityOfKill.
bool endgame_kill(CounterRng& rng);

/// Advances one missile by dt against the world's current aircraft states
/// (whose prev_position holds the start-of-step position). Updates the
/// missile's guidance mode and returns the terminal result, if any. A KILL
/// result does not modify the target; the caller applies it.
MissileStep missile_step(MissileState& missile, const WorldState& world, double dt, CounterRng& rng);

/// Launches a missile and records its ShotEvent in the world.
MissileState& launch_missile(WorldState& world, AircraftState& shooter, const AircraftState& target);

// --- engagement ------------------------------------------------------------

/// Builds the initial world for a case.
WorldState initial_world(const doe::SimCase& sim_case, const ScenarioConfig& config = {});

/// Advances the whole world by one tick. With `run_behaviors` false only
/// aircraft kinematics and missile flyouts advance.
void step_world(WorldState& world, CounterRng& rng, bool run_behaviors = true);

/// True when every aircraft of `side` is destroyed.
bool side_destroyed(const WorldState& world, Side side);

struct EngagementResult {
  std::vector<ShotEvent> events;
  RunSummary summary;
};

/// Runs one engagement to completion. Pure function of (case, seed, config).
EngagementResult run_engagement(const doe::SimCase& sim_case, std::uint64_t seed,
                                const ScenarioConfig& config = {}, std::size_t case_index = 0,
                                std::uint64_t run_id = 0);

// --- files -----------------------------------------------------------------

void write_shots(const std::filesystem::path& path, std::span<const ShotEvent> events);
std::vector<ShotEvent> read_shots(const std::filesystem::path& path);
void write_runs(const std::filesystem::path& path, std::span<const RunSummary> runs);
std::vector<RunSummary> read_runs(const std::filesystem::path& path);

}  // namespace shotlab::sim
