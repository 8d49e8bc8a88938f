#include <algorithm>
#include <cmath>
#include <limits>

#include "shotlab/sim.hpp"

namespace shotlab::sim {

double closest_approach(const Vec3& relative_start, const Vec3& relative_end) noexcept {
  const Vec3 d = relative_end - relative_start;
  const double dd = dot(d, d);
  if (dd <= 0.0) return norm(relative_start);
  const double s = std::clamp(-dot(relative_start, d) / dd, 0.0, 1.0);
  return norm(relative_start + d * s);
}

bool endgame_kill(CounterRng& rng) { return rng.uniform() < kProbabilityOfKill; }

namespace {

// Augmented proportional navigation: N * Vc * (Omega x LOS) with Omega the
// line-of-sight rotation rate, plus N/2 times the target acceleration normal
// to the line of sight. Only the component normal to the missile's velocity
// is applied, capped at kMaxLateralAccel.
Vec3 pn_acceleration(const MissileState& m, const Vec3& target_pos, const Vec3& target_vel,
                     Vec3 target_accel) {
  const Vec3 r = target_pos - m.position;
  const double r2 = dot(r, r);
  if (r2 < 1e-9) return {};
  const double range = std::sqrt(r2);
  const Vec3 vr = target_vel - m.velocity();
  const Vec3 omega = cross(r, vr) * (1.0 / r2);
  const double closing = -dot(r, vr) / range;
  const Vec3 los = r * (1.0 / range);
  Vec3 a = cross(omega, los) * (kNavigationGain * closing);
  target_accel -= los * dot(target_accel, los);
  a += target_accel * (0.5 * kNavigationGain);
  a -= m.direction * dot(a, m.direction);
  const double mag = norm(a);
  if (mag > kMaxLateralAccel) a = a * (kMaxLateralAccel / mag);
  return a;
}

}  // namespace

Vec3 lead_direction(const Vec3& shooter_pos, const Vec3& target_pos, const Vec3& target_vel) {
  // Intercept point for a constant-velocity target and a constant average
  // missile speed: |r + v t| = s t.
  const Vec3 r = target_pos - shooter_pos;
  const double a = dot(target_vel, target_vel) - kLeadSpeed * kLeadSpeed;
  const double b = 2.0 * dot(r, target_vel);
  const double c = dot(r, r);
  double t = -1.0;
  const double disc = b * b - 4.0 * a * c;
  if (std::abs(a) > 1e-9 && disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double t1 = (-b - sq) / (2.0 * a);
    const double t2 = (-b + sq) / (2.0 * a);
    t = std::max(t1, t2);
    if (std::min(t1, t2) > 0.0) t = std::min(t1, t2);
  }
  const Vec3 aim = t > 0.0 ? r + target_vel * t : r;
  return aim * (1.0 / norm(aim));
}

MissileStep missile_step(MissileState& m, const WorldState& world, double dt, CounterRng& rng) {
  const auto& target = world.aircraft_by_id(m.target_id);
  const auto& shooter = world.aircraft_by_id(m.shooter_id);

  // A target destroyed by another missile cannot be killed again.
  if (!target.alive) return MissileStep::Miss;

  const double range_now = norm(target.position - m.position);
  if (m.guidance == Guidance::Supported) {
    const bool lost_support =
        !shooter.alive ||
        std::abs(wrap_180(bearing_deg(shooter.position, target.position) - shooter.heading_deg)) >
            kTrackConeDeg;
    if (lost_support) {
      m.guidance = Guidance::Dumb;
    } else if (range_now <= m.activation_distance_m) {
      m.guidance = Guidance::Active;
    }
  }

  // The flyout is integrated in sub-steps with the target moving linearly
  // between its start- and end-of-tick states; the endgame test uses the
  // closest approach over every sub-step.
  const Vec3 target_accel = (target.velocity() - target.prev_velocity) * (1.0 / dt);
  const double h = dt / kFlyoutSubsteps;
  double cpa = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kFlyoutSubsteps; ++k) {
    const double f0 = static_cast<double>(k) / kFlyoutSubsteps;
    const double f1 = static_cast<double>(k + 1) / kFlyoutSubsteps;
    const Vec3 tgt0 = target.prev_position + (target.position - target.prev_position) * f0;
    const Vec3 tgt1 = target.prev_position + (target.position - target.prev_position) * f1;
    const Vec3 tgt_vel = target.prev_velocity + (target.velocity() - target.prev_velocity) * f0;

    if (m.guidance != Guidance::Dumb) {
      const Vec3 accel = pn_acceleration(m, tgt0, tgt_vel, target_accel);
      const Vec3 v = m.velocity() + accel * h;
      const double vn = norm(v);
      if (vn > 0.0) m.direction = v * (1.0 / vn);
    }
    if (m.time_of_flight_s < kBoostTime - 1e-9) {
      m.speed_mps = kBoostSpeed;
    } else {
      m.speed_mps *= std::exp(-kDragConstant * h * m.speed_mps / 300.0);
    }
    const Vec3 start = m.position;
    m.position += m.direction * (m.speed_mps * h);
    m.time_of_flight_s += h;
    cpa = std::min(cpa, closest_approach(tgt0 - start, tgt1 - m.position));
  }

  const double range_end = norm(target.position - m.position);
  if (m.guidance != Guidance::Dumb) {
    m.closest_approach_m = std::min(m.closest_approach_m, cpa);
    if (cpa <= kLethalRadius) return endgame_kill(rng) ? MissileStep::Kill : MissileStep::Miss;
  }

  if (range_end > m.last_range_m) {
    m.opening_time_s += dt;
  } else {
    m.opening_time_s = 0.0;
  }
  m.last_range_m = range_end;
  if (m.opening_time_s >= kOpeningTimeout - 1e-9) return MissileStep::Miss;
  if (m.time_of_flight_s > kMaxFlightTime + 1e-9) return MissileStep::Miss;
  return MissileStep::InFlight;
}

MissileState& launch_missile(WorldState& world, AircraftState& shooter, const AircraftState& target) {
  const auto& own = world.settings(shooter.side);
  const Vec3 los = target.position - shooter.position;
  const double distance = norm(los);

  ShotEvent ev;
  ev.run_id = world.run_id;
  ev.case_index = world.case_index;
  ev.seed = world.seed;
  ev.time_s = world.time_s;
  ev.shooter_side = shooter.side;
  ev.shooter = {shooter.id, shooter.position, shooter.heading_deg, shooter.speed_mps};
  ev.target = {target.id, target.position, target.heading_deg, target.speed_mps};
  ev.distance_m = distance;
  ev.off_boresight_deg = wrap_180(bearing_deg(shooter.position, target.position) - shooter.heading_deg);
  ev.delta_heading_deg = wrap_360(shooter.heading_deg - target.heading_deg);
  ev.wez_rmax_m = wez_max_range(shooter, target, own.range_factor);
  world.events.push_back(ev);

  MissileState m;
  m.id = static_cast<int>(world.missiles.size());
  m.shooter_id = shooter.id;
  m.target_id = target.id;
  m.side = shooter.side;
  m.position = shooter.position;
  m.direction = lead_direction(shooter.position, target.position, target.velocity());
  m.speed_mps = kBoostSpeed;
  m.activation_distance_m = own.activation_distance_m;
  m.last_range_m = distance;
  m.closest_approach_m = distance;
  m.event_index = world.events.size() - 1;
  --shooter.missiles_left;
  world.missiles.push_back(m);
  return world.missiles.back();
}

}  // namespace shotlab::sim
