#include <algorithm>
#include <cmath>
#include <numbers>

#include "shotlab/error.hpp"
#include "shotlab/sim.hpp"

namespace shotlab::sim {

std::string_view to_string(Side side) { return side == Side::Blue ? "blue" : "red"; }

std::string_view to_string(Behavior behavior) {
  switch (behavior) {
    case Behavior::Cap: return "CAP";
    case Behavior::Commit: return "COMMIT";
    case Behavior::Engage: return "ENGAGE";
    case Behavior::Evade: return "EVADE";
  }
  return "?";
}

std::string_view to_string(Guidance guidance) {
  switch (guidance) {
    case Guidance::Supported: return "SUPPORTED";
    case Guidance::Active: return "ACTIVE";
    case Guidance::Dumb: return "DUMB";
  }
  return "?";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Pending: return "PENDING";
    case Outcome::Kill: return "KILL";
    case Outcome::NoKill: return "NO_KILL";
  }
  return "?";
}

// Turn rates are not tabulated for these airframes; the values keep the
// lighter type 1 slightly more agile.
PlatformSpec PlatformSpec::red() { return {Side::Red, 0, 4, -10.0, 5.0, 1.1}; }

PlatformSpec PlatformSpec::blue(int aircraft_type) {
  if (aircraft_type == 1) return {Side::Blue, 1, 3, -10.0, 5.5, 1.1};
  if (aircraft_type == 2) return {Side::Blue, 2, 6, -25.0, 5.0, 1.1};
  throw SpecificationError("blue concept must be 1 or 2, got " + std::to_string(aircraft_type));
}

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}  // namespace

Vec3 heading_vector(double heading_deg) noexcept {
  const double h = heading_deg * kDegToRad;
  return {std::sin(h), std::cos(h), 0.0};
}

double wrap_360(double deg) noexcept {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w -= 360.0;
  return w;
}

double wrap_180(double deg) noexcept {
  double w = wrap_360(deg + 180.0) - 180.0;
  return w;
}

double bearing_deg(const Vec3& from, const Vec3& to) noexcept {
  return wrap_360(std::atan2(to.x - from.x, to.y - from.y) * kRadToDeg);
}

double speed_of_sound(double altitude_m) {
  if (!(altitude_m >= 0.0 && altitude_m <= 20000.0)) {
    throw DomainError("speed_of_sound: altitude " + std::to_string(altitude_m) +
                      " m outside [0, 20000]");
  }
  if (altitude_m > 11000.0) return 295.07;
  return std::sqrt(1.4 * 287.05 * (288.15 - 0.0065 * altitude_m));
}

double wez_max_range(const AircraftState& shooter, const AircraftState& target, double range_factor) {
  const Vec3 los = target.position - shooter.position;
  const double range = norm(los);
  if (range < 1e-6) throw GeometryError("wez_max_range: shooter and target are coincident");
  const Vec3 unit_los = los * (1.0 / range);

  const double mean_alt = 0.5 * (shooter.position.z + target.position.z);
  const double altitude_term = std::clamp(1.0 + 0.4 * (mean_alt - 10000.0) / 10000.0, 0.6, 1.4);

  const double closing = -dot(unit_los, target.velocity() - shooter.velocity());
  const double closure_term = std::clamp(1.0 + 0.5 * closing / 600.0, 0.5, 1.5);

  // Aspect: angle between the target's velocity and the target-to-shooter line.
  const Vec3 target_vel = target.velocity();
  const double target_speed = norm(target_vel);
  const double cos_aspect = target_speed > 0.0 ? -dot(target_vel, unit_los) / target_speed : 1.0;
  const double aspect_term = 0.75 + 0.25 * cos_aspect;

  const double base = kWezBaseRange * altitude_term * closure_term * aspect_term;
  return range_factor * std::clamp(base, 5000.0, 80000.0);
}

double effective_detection_range(double radar_range_m, double target_rcs_db) {
  return radar_range_m * std::pow(10.0, (target_rcs_db - (-10.0)) / 40.0);
}

void advance_aircraft(AircraftState& a, const PlatformSpec& platform, double dt) {
  constexpr double kSpeedRate = 5.0;  // m/s^2, both directions

  const double turn = wrap_180(a.cmd_heading_deg - a.heading_deg);
  const double max_turn = platform.max_turn_rate_dps * dt;
  a.heading_deg = wrap_360(a.heading_deg + std::clamp(turn, -max_turn, max_turn));

  const double dv = a.cmd_speed_mps - a.speed_mps;
  a.speed_mps += std::clamp(dv, -kSpeedRate * dt, kSpeedRate * dt);

  const double max_dz = a.speed_mps * std::sin(a.cmd_path_angle_deg * kDegToRad) * dt;
  const double dz = std::clamp(a.cmd_altitude_m - a.position.z, -max_dz, max_dz);
  a.position.z += dz;
  a.vertical_speed_mps = dz / dt;

  const Vec3 h = heading_vector(a.heading_deg);
  a.position.x += h.x * a.speed_mps * dt;
  a.position.y += h.y * a.speed_mps * dt;
}

}  // namespace shotlab::sim
