#include <algorithm>
#include <cmath>

#include "shotlab/sim.hpp"

namespace shotlab::sim {

namespace {

SideSettings blue_settings(const doe::SimCase& c) {
  SideSettings s;
  s.platform = PlatformSpec::blue(c.blue_concept);
  s.track_range_m = c.blue_track_range_m;
  s.rcs_db = s.platform.baseline_rcs_db + c.blue_rcs_delta_db;
  s.activation_distance_m = c.blue_missile_act_dist_m;
  s.range_factor = c.blue_missile_range_factor;
  s.shot_philosophy_pct = c.blue_shot_philosophy_pct;
  s.maneuver_altitude_m = c.blue_alt_m;
  s.maneuver_mach = c.blue_speed_mach;
  s.cap_mach = c.blue_cap_mach;
  return s;
}

SideSettings red_settings(const doe::SimCase& c, const ScenarioConfig& cfg) {
  SideSettings s;
  s.platform = PlatformSpec::red();
  s.track_range_m = cfg.red_track_range_m;
  s.rcs_db = s.platform.baseline_rcs_db;
  s.activation_distance_m = cfg.red_activation_distance_m;
  s.range_factor = cfg.red_range_factor;
  s.shot_philosophy_pct = cfg.red_shot_philosophy_pct;
  s.maneuver_altitude_m = c.red_alt_m;
  s.maneuver_mach = c.red_speed_mach;
  s.cap_mach = c.red_cap_mach;
  return s;
}

// Line-abreast wall centred on x = 0 at the given northing; `toward` is +1
// when the enemy lies to the north.
void spawn_wall(WorldState& world, Side side, int count, double spacing_m, double northing,
                double toward) {
  const auto& s = world.settings(side);
  const double speed = s.cap_mach * speed_of_sound(std::clamp(s.maneuver_altitude_m, 0.0, 20000.0));
  for (int i = 0; i < count; ++i) {
    AircraftState a;
    a.id = static_cast<int>(world.aircraft.size());
    a.side = side;
    a.position = {(i - 0.5 * (count - 1)) * spacing_m, northing, s.maneuver_altitude_m};
    a.prev_position = a.position;
    a.heading_deg = toward > 0 ? 0.0 : 180.0;
    a.speed_mps = speed;
    a.missiles_left = s.platform.missile_count;
    a.cmd_heading_deg = a.heading_deg;
    a.cmd_speed_mps = speed;
    a.cmd_altitude_m = s.maneuver_altitude_m;
    a.cap_rear = a.position;
    a.cap_front = a.position + Vec3{0.0, toward * world.config.cap_leg_m, 0.0};
    world.aircraft.push_back(a);
  }
}

void apply_action(WorldState& world, AircraftState& a, const Action& act) {
  a.behavior = act.behavior;
  a.committed_target = act.committed_target;
  a.cmd_heading_deg = act.heading_deg;
  a.cmd_speed_mps = act.speed_mps;
  a.cmd_altitude_m = act.altitude_m;
  a.cmd_path_angle_deg = act.path_angle_deg;
  if (act.switch_cap_leg) a.cap_inbound = !a.cap_inbound;
  if (act.fire_at) {
    const auto& target = world.aircraft_by_id(*act.fire_at);
    launch_missile(world, a, target);
  }
}

void resolve(WorldState& world, MissileState& m, Outcome outcome) {
  m.outcome = outcome;
  world.events[m.event_index].outcome = outcome;
}

}  // namespace

bool side_destroyed(const WorldState& world, Side side) {
  return std::none_of(world.aircraft.begin(), world.aircraft.end(),
                      [side](const AircraftState& a) { return a.side == side && a.alive; });
}

WorldState initial_world(const doe::SimCase& sim_case, const ScenarioConfig& config) {
  WorldState world;
  world.config = config;
  world.blue = blue_settings(sim_case);
  world.red = red_settings(sim_case, config);
  const int blue_count = sim_case.blue_six_ship ? 6 : 4;
  spawn_wall(world, Side::Blue, blue_count, sim_case.blue_spacing_deg * config.meters_per_degree, 0.0,
             +1.0);
  spawn_wall(world, Side::Red, 4, sim_case.red_spacing_deg * config.meters_per_degree,
             config.cap_separation_m, -1.0);
  return world;
}

void step_world(WorldState& world, CounterRng& rng, bool run_behaviors) {
  const double dt = world.config.dt_s;

  if (run_behaviors) {
    for (auto& a : world.aircraft) {
      if (!a.alive || a.next_eval_s > world.time_s + 1e-9) continue;
      const Action act = behavior_step(a, world, rng);
      apply_action(world, a, act);
      a.next_eval_s = world.time_s + next_evaluation_delay(rng);
    }
  }

  for (auto& a : world.aircraft) {
    a.prev_position = a.position;
    a.prev_velocity = a.velocity();
    if (a.alive) advance_aircraft(a, world.settings(a.side).platform, dt);
  }

  for (auto& m : world.missiles) {
    if (m.outcome != Outcome::Pending) continue;
    switch (missile_step(m, world, dt, rng)) {
      case MissileStep::InFlight:
        break;
      case MissileStep::Kill:
        world.aircraft[static_cast<std::size_t>(m.target_id)].alive = false;
        resolve(world, m, Outcome::Kill);
        break;
      case MissileStep::Miss:
        resolve(world, m, Outcome::NoKill);
        break;
    }
  }

  ++world.steps;
  world.time_s = static_cast<double>(world.steps) * dt;
}

EngagementResult run_engagement(const doe::SimCase& sim_case, std::uint64_t seed,
                                const ScenarioConfig& config, std::size_t case_index,
                                std::uint64_t run_id) {
  WorldState world = initial_world(sim_case, config);
  world.seed = seed;
  world.case_index = case_index;
  world.run_id = run_id;
  CounterRng rng(seed);
  for (auto& a : world.aircraft) a.next_eval_s = next_evaluation_delay(rng);

  const auto max_steps = static_cast<std::uint64_t>(std::llround(config.max_time_s / config.dt_s));
  auto pending = [&world] {
    return std::any_of(world.missiles.begin(), world.missiles.end(),
                       [](const MissileState& m) { return m.outcome == Outcome::Pending; });
  };
  while (world.steps < max_steps) {
    const bool combat_over = side_destroyed(world, Side::Blue) || side_destroyed(world, Side::Red);
    if (combat_over && !pending()) break;
    step_world(world, rng, !combat_over);
  }
  // Missiles still in flight at the time cap never reach an endgame.
  for (auto& m : world.missiles) {
    if (m.outcome == Outcome::Pending) resolve(world, m, Outcome::NoKill);
  }

  EngagementResult result;
  result.events = std::move(world.events);
  auto& s = result.summary;
  s.run_id = run_id;
  s.case_index = case_index;
  s.seed = seed;
  for (const auto& a : world.aircraft) {
    auto& initial = a.side == Side::Blue ? s.blue_initial : s.red_initial;
    auto& alive = a.side == Side::Blue ? s.blue_survivors : s.red_survivors;
    ++initial;
    if (a.alive) ++alive;
  }
  for (const auto& m : world.missiles) {
    (m.side == Side::Blue ? s.missiles_fired_blue : s.missiles_fired_red)++;
  }
  s.end_time_s = world.time_s;
  return result;
}

}  // namespace shotlab::sim
