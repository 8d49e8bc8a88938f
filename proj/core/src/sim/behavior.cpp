#include <algorithm>
#include <cmath>

#include "shotlab/sim.hpp"

namespace shotlab::sim {

bool Tracklist::contains(int id) const noexcept {
  return std::any_of(contacts.begin(), contacts.end(), [id](const Contact& c) { return c.id == id; });
}

Tracklist sense(const WorldState& world, const AircraftState& agent) {
  Tracklist out;
  const auto& own = world.settings(agent.side);
  const Side enemy_side = agent.side == Side::Blue ? Side::Red : Side::Blue;
  const auto& enemy = world.settings(enemy_side);
  const double track_range = effective_detection_range(own.track_range_m, enemy.rcs_db);
  const double scan_range = kScanFraction * track_range;

  for (const auto& other : world.aircraft) {
    if (!other.alive || other.side == agent.side) continue;
    const double range = norm(other.position - agent.position);
    const bool committed = agent.committed_target == other.id;
    if (range <= scan_range || (committed && range <= track_range)) {
      out.contacts.push_back({other.id, range});
    }
  }
  std::sort(out.contacts.begin(), out.contacts.end(), [](const Contact& a, const Contact& b) {
    return a.range_m != b.range_m ? a.range_m < b.range_m : a.id < b.id;
  });

  double nearest = kMissileWarningRange;
  for (const auto& m : world.missiles) {
    if (m.outcome != Outcome::Pending || m.target_id != agent.id || m.guidance != Guidance::Active) {
      continue;
    }
    const double range = norm(m.position - agent.position);
    if (range <= nearest) {
      if (!out.threat_missile || range < nearest) out.threat_missile = m.id;
      nearest = range;
      out.missile_warning = true;
    }
  }
  return out;
}

double next_evaluation_delay(CounterRng& rng) { return rng.uniform(0.8, 1.2); }

bool fire_decision(const AircraftState& agent, const AircraftState& target, const WorldState& world) {
  if (agent.missiles_left <= 0 || !agent.alive || !target.alive) return false;
  const auto& own = world.settings(agent.side);
  const double distance = norm(target.position - agent.position);
  const double rmax = wez_max_range(agent, target, own.range_factor);
  if (distance > own.shot_philosophy_pct / 100.0 * rmax) return false;
  for (const auto& m : world.missiles) {
    if (m.outcome == Outcome::Pending && m.side == agent.side && m.target_id == target.id) return false;
  }
  return true;
}

namespace {

double mach_to_mps(double mach, double altitude_m) {
  return mach * speed_of_sound(std::clamp(altitude_m, 0.0, 20000.0));
}

bool committed_by_teammate(const WorldState& world, const AircraftState& agent, int target_id) {
  for (const auto& mate : world.aircraft) {
    if (mate.id == agent.id || mate.side != agent.side || !mate.alive) continue;
    if (mate.committed_target == target_id) return true;
  }
  return false;
}

}  // namespace

Action behavior_step(const AircraftState& agent, const WorldState& world, CounterRng& /*rng*/) {
  const auto& own = world.settings(agent.side);
  const Tracklist tracks = sense(world, agent);
  Action act;
  act.committed_target = agent.committed_target;
  act.altitude_m = own.maneuver_altitude_m;
  act.heading_deg = agent.cmd_heading_deg;
  act.speed_mps = agent.cmd_speed_mps;

  if (tracks.missile_warning) {
    const auto& threat = world.missiles.at(static_cast<std::size_t>(*tracks.threat_missile));
    act.behavior = Behavior::Evade;
    act.heading_deg = bearing_deg(threat.position, agent.position);
    act.speed_mps = mach_to_mps(own.platform.max_mach, agent.position.z);
    act.altitude_m = kMinAltitude;
    act.path_angle_deg = kEvadeDiveDeg;
    return act;
  }

  std::optional<Contact> target;
  if (agent.committed_target) {
    const int id = *agent.committed_target;
    for (const auto& c : tracks.contacts) {
      if (c.id == id) target = c;
    }
  }
  if (!target) {
    for (const auto& c : tracks.contacts) {
      if (!committed_by_teammate(world, agent, c.id)) {
        target = c;
        break;
      }
    }
  }

  if (target) {
    const auto& tgt = world.aircraft_by_id(target->id);
    act.committed_target = target->id;
    act.heading_deg = bearing_deg(agent.position, tgt.position);
    act.speed_mps = mach_to_mps(own.maneuver_mach, agent.position.z);
    const double rmax = wez_max_range(agent, tgt, own.range_factor);
    act.behavior = target->range_m <= rmax ? Behavior::Engage : Behavior::Commit;
    if (act.behavior == Behavior::Engage && fire_decision(agent, tgt, world)) act.fire_at = tgt.id;
    return act;
  }

  act.behavior = Behavior::Cap;
  act.committed_target.reset();
  const Vec3 waypoint = agent.cap_inbound ? agent.cap_front : agent.cap_rear;
  const double dx = waypoint.x - agent.position.x;
  const double dy = waypoint.y - agent.position.y;
  const Vec3* aim = &waypoint;
  if (std::hypot(dx, dy) < 2000.0) {
    act.switch_cap_leg = true;
    aim = agent.cap_inbound ? &agent.cap_rear : &agent.cap_front;
  }
  act.heading_deg = bearing_deg(agent.position, *aim);
  act.speed_mps = mach_to_mps(own.cap_mach, agent.position.z);
  return act;
}

}  // namespace shotlab::sim
