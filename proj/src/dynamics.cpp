#include "bbeltrami/dynamics.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bbeltrami/errors.hpp"
#include "bbeltrami/spectral.hpp"

namespace bbeltrami {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;
using State = std::array<double, 3>;

/// Distance to {s = 0} u {s = pi} from the log-tan coordinate u.
double logtan_distance(double u) { return 2.0 * std::atan(std::exp(-std::abs(u))); }

struct ChartSetup {
  Chart chart = Chart::Direct;
  bool global = false;
  double eps = 0.0;    // chart half-width (chart model)
  int sign = 1;        // sign of z (chart model)
  int interval = 0;    // k with z in (k pi, (k+1) pi) (global model)
};

}  // namespace

std::string to_string(Chart chart) {
  switch (chart) {
    case Chart::Auto: return "auto";
    case Chart::Direct: return "direct";
    case Chart::LogZ: return "logZ";
    case Chart::LogTan: return "logTan";
  }
  return "direct";
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::TimeLimit: return "timeLimit";
    case Termination::ZFloor: return "zFloor";
    case Termination::ZCeiling: return "zCeiling";
    case Termination::ChartExit: return "chartExit";
    case Termination::EquilibriumLock: return "equilibriumLock";
  }
  return "timeLimit";
}

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::EscapeForward: return "escapeForward";
    case VerdictKind::EscapeBackward: return "escapeBackward";
    case VerdictKind::SingularPeriodic: return "singularPeriodic";
    case VerdictKind::GeneralizedSPO: return "generalizedSPO";
    case VerdictKind::Regular: return "regular";
  }
  return "regular";
}

std::string to_string(LimitSet::Kind kind) {
  switch (kind) {
    case LimitSet::Kind::Point: return "point";
    case LimitSet::Kind::ClosedCurve: return "closedCurve";
    case LimitSet::Kind::Unresolved: return "unresolved";
  }
  return "unresolved";
}

double Trajectory::max_h_drift() const {
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(s.H - samples.front().H));
  return worst;
}

Trajectory integrate(const AnyField& field, const Vec3& start, double t0, double t1,
                     const IntegrateOptions& opts) {
  const PlanarPart& part = planar_part(field);
  const bool global = std::holds_alternative<GlobalTorusField>(field);

  ChartSetup cs;
  cs.global = global;
  Trajectory traj;
  traj.on_z = opts.on_z;
  State y{start[0], start[1], 0.0};

  if (opts.on_z) {
    double zc = start[2];
    if (global) {
      zc = wrap_angle(zc);
      if (std::abs(std::sin(zc)) > 1e-12) throw SpecError("on-Z start must have z = 0 or z = pi");
      zc = std::abs(zc - kPi) < 1e-6 ? kPi : 0.0;
    } else if (zc != 0.0) {
      throw SpecError("on-Z start must have z = 0");
    }
    cs.chart = Chart::Direct;
    y[2] = zc;
    traj.lower_component = traj.upper_component = zc;
  } else if (global) {
    const double z = wrap_angle(start[2]);
    if (std::abs(std::sin(z)) == 0.0 || z == 0.0 || z == kPi)
      throw SpecError("start lies on Z; use the on-Z option");
    cs.interval = z < kPi ? 0 : 1;
    cs.chart = opts.chart == Chart::Auto ? Chart::LogTan : opts.chart;
    if (cs.chart == Chart::LogZ) throw SpecError("the log-z chart applies to the chart model only");
    const double s = z - cs.interval * kPi;
    y[2] = cs.chart == Chart::LogTan ? std::log(std::tan(0.5 * s)) : z;
    traj.lower_component = cs.interval * kPi;
    traj.upper_component = cs.interval == 0 ? kPi : 0.0;
    traj.z_sign = cs.interval;
  } else {
    const auto& f = std::get<SymmetricBField>(field);
    cs.eps = f.eps();
    if (start[2] == 0.0) throw SpecError("start lies on Z; use the on-Z option");
    if (std::abs(start[2]) >= cs.eps) throw CheckError("start lies outside the chart |z| < eps");
    cs.sign = start[2] > 0.0 ? 1 : -1;
    cs.chart = opts.chart == Chart::Auto ? Chart::LogZ : opts.chart;
    if (cs.chart == Chart::LogTan) throw SpecError("the log-tan chart applies to the global model only");
    y[2] = cs.chart == Chart::LogZ ? std::log(std::abs(start[2])) : start[2];
    traj.z_sign = cs.sign;
  }
  traj.chart = cs.chart;

  const double flip = cs.interval == 1 ? -1.0 : 1.0;
  auto rhs = [&](const State& s, State& ds, double /*t*/) {
    ds[0] = part.Xx(s[0], s[1]);
    ds[1] = part.Xy(s[0], s[1]);
    if (opts.on_z) {
      ds[2] = 0.0;
      return;
    }
    const double xz = part.Xz(s[0], s[1]);
    switch (cs.chart) {
      case Chart::LogZ: ds[2] = xz; break;
      case Chart::LogTan: ds[2] = flip * xz; break;
      default: ds[2] = (global ? std::sin(s[2]) : s[2]) * xz; break;
    }
  };

  // Physical z and log distance to Z for a chart state.
  auto to_sample = [&](double t, const State& s) {
    Sample out{t, s[0], s[1], 0.0, -part.Xz(s[0], s[1]), 0.0};
    if (opts.on_z) {
      out.z = s[2];
      out.log_dist = 0.0;
      return out;
    }
    switch (cs.chart) {
      case Chart::LogZ:
        out.z = cs.sign * std::exp(s[2]);
        out.log_dist = s[2];
        break;
      case Chart::LogTan:
        out.z = cs.interval * kPi + 2.0 * std::atan(std::exp(s[2]));
        out.log_dist = std::log(logtan_distance(s[2]));
        break;
      default:
        out.z = s[2];
        if (global) {
          const double r = s[2] - cs.interval * kPi;
          out.log_dist = std::log(std::max(std::min(r, kPi - r), 1e-300));
        } else {
          out.log_dist = std::log(std::max(std::abs(s[2]), 1e-300));
        }
        break;
    }
    return out;
  };

  const double log_floor = opts.z_floor > 0.0 ? std::log(opts.z_floor) : -std::numeric_limits<double>::infinity();
  // Returns a termination reason when the state has left the admissible region.
  auto check = [&](const Sample& s, const State& st) -> std::optional<Termination> {
    if (opts.on_z) return std::nullopt;
    if (!global) {
      if (cs.chart == Chart::Direct && s.z * cs.sign <= 0.0) return Termination::ZFloor;
      if (s.log_dist <= log_floor) return Termination::ZFloor;
      if (std::abs(s.z) >= cs.eps) return Termination::ChartExit;
      return std::nullopt;
    }
    const bool lower_side = cs.chart == Chart::LogTan ? st[2] < 0.0
                                                      : (st[2] - cs.interval * kPi) < 0.5 * kPi;
    if (cs.chart == Chart::Direct) {
      const double r = st[2] - cs.interval * kPi;
      if (r <= 0.0) return Termination::ZFloor;
      if (r >= kPi) return Termination::ZCeiling;
    }
    if (s.log_dist <= log_floor) return lower_side ? Termination::ZFloor : Termination::ZCeiling;
    return std::nullopt;
  };

  traj.samples.push_back(to_sample(t0, y));
  if (auto stop = check(traj.samples.back(), y)) {
    traj.termination = *stop;
    return traj;
  }

  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(opts.atol, opts.rtol);
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  double dt = dir * std::min(opts.initial_step, std::abs(t1 - t0));
  std::size_t steps = 0;
  traj.termination = Termination::TimeLimit;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opts.max_steps) throw CheckError("integration exceeded the maximum step count");
    if (std::abs(dt) > opts.max_step) dt = dir * opts.max_step;
    if (dir * (t + dt - t1) > 0.0) dt = t1 - t;
    const odeint::controlled_step_result res = stepper.try_step(rhs, y, t, dt);
    if (res == odeint::fail) {
      if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t))) {
        std::ostringstream os;
        os << "step-size underflow at t=" << t;
        throw CheckError(os.str());
      }
      continue;
    }
    traj.samples.push_back(to_sample(t, y));
    if (auto stop = check(traj.samples.back(), y)) {
      traj.termination = *stop;
      break;
    }
  }
  return traj;
}

EquilibriumList restricted_equilibria(const AnyField& field) {
  const MorseAudit audit = morse_audit(planar_part(field).Xz, 64);
  EquilibriumList out;
  for (const auto& c : audit.critical_points) out.emplace_back(c.x, c.y);
  return out;
}

OrbitPair integrate_both_ways(const AnyField& field, const Vec3& start,
                              const ClassifyOptions& opts) {
  IntegrateOptions io;
  io.rtol = opts.rtol;
  io.atol = opts.atol;
  io.z_floor = opts.z_floor;
  return {integrate(field, start, 0.0, opts.t_max, io),
          integrate(field, start, 0.0, -opts.t_max, io)};
}

namespace {

OrbitEnd analyze_end(const AnyField& field, const Trajectory& traj,
                     const EquilibriumList& equilibria, const ClassifyOptions& opts) {
  const PlanarPart& part = planar_part(field);
  const Sample& last = traj.back();
  OrbitEnd end;
  end.termination = traj.termination;
  end.end_point = {last.x, last.y, last.z};
  end.t_end = last.t;
  end.restricted_speed = std::hypot(part.Xx(last.x, last.y), part.Xy(last.x, last.y));

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < equilibria.size(); ++i) {
    const double d = torus_distance(last.x, last.y, equilibria[i].first, equilibria[i].second);
    if (d < best) {
      best = d;
      end.equilibrium = static_cast<int>(i);
    }
  }
  end.equilibrium_distance = best;
  if (best >= opts.endpoint_tol) end.equilibrium = -1;

  if (traj.termination == Termination::ZFloor || traj.termination == Termination::ZCeiling) {
    end.accumulates_on_z = true;
    end.component = traj.termination == Termination::ZFloor ? traj.lower_component
                                                             : traj.upper_component;
    // t_k: first time the distance to Z drops below 10^-k.
    int k = 1;
    for (const auto& s : traj.samples) {
      while (s.log_dist < -k * std::log(10.0) && s.log_dist > std::log(opts.z_floor) - 1.0 &&
             k <= 16) {
        end.visit_times.push_back(s.t);
        ++k;
      }
    }
    end.locked = end.equilibrium >= 0 && end.restricted_speed < opts.lock_speed;
    if (end.locked) end.termination = Termination::EquilibriumLock;
  } else if (traj.termination == Termination::TimeLimit) {
    // Recurrent approach: local minima of the distance to Z below sqrt(z_floor).
    const double threshold = 0.5 * std::log(opts.z_floor);
    std::vector<std::size_t> minima;
    for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
      const double d = traj.samples[i].log_dist;
      if (d < traj.samples[i - 1].log_dist && d <= traj.samples[i + 1].log_dist && d < threshold)
        minima.push_back(i);
    }
    if (static_cast<int>(minima.size()) >= opts.recurrence_minima) {
      double spread = 0.0;
      const Sample& ref = traj.samples[minima.back()];
      for (std::size_t i = minima.size() - opts.recurrence_minima; i < minima.size(); ++i)
        spread = std::max(spread, torus_distance(ref.x, ref.y, traj.samples[minima[i]].x,
                                                 traj.samples[minima[i]].y));
      if (spread >= opts.endpoint_tol) {
        end.accumulates_on_z = true;
        for (auto i : minima) end.visit_times.push_back(traj.samples[i].t);
      }
    }
  }
  return end;
}

Vec3 lock_point(const OrbitEnd& end, const EquilibriumList& equilibria) {
  const auto& p = equilibria[static_cast<std::size_t>(end.equilibrium)];
  return {p.first, p.second, end.component};
}

}  // namespace

OrbitVerdict classify_orbit(const AnyField& field, const Vec3& start,
                            const EquilibriumList& equilibria, const ClassifyOptions& opts) {
  return classify_trajectories(field, integrate_both_ways(field, start, opts), equilibria, opts);
}

OrbitVerdict classify_trajectories(const AnyField& field, const OrbitPair& pair,
                                   const EquilibriumList& equilibria, const ClassifyOptions& opts) {
  OrbitVerdict v;
  v.horizon = opts.t_max;
  v.rtol = opts.rtol;
  v.region = pair.forward.z_sign;
  v.forward = analyze_end(field, pair.forward, equilibria, opts);
  v.backward = analyze_end(field, pair.backward, equilibria, opts);

  const bool f_lock = v.forward.locked, b_lock = v.backward.locked;
  if (f_lock) v.p_plus = lock_point(v.forward, equilibria);
  if (b_lock) v.p_minus = lock_point(v.backward, equilibria);

  if (f_lock && b_lock) {
    v.kind = VerdictKind::SingularPeriodic;
  } else if (f_lock) {
    v.kind = VerdictKind::EscapeForward;
  } else if (b_lock) {
    v.kind = VerdictKind::EscapeBackward;
  } else if (v.forward.accumulates_on_z && v.backward.accumulates_on_z) {
    v.kind = VerdictKind::GeneralizedSPO;
  } else {
    v.kind = VerdictKind::Regular;
    auto open = [](const OrbitEnd& e) {
      return e.termination == Termination::TimeLimit && !e.accumulates_on_z;
    };
    v.inconclusive = open(v.forward) || open(v.backward);
  }
  return v;
}

OrbitVerdict classify_orbit(const AnyField& field, const Vec3& start, const ClassifyOptions& opts) {
  return classify_orbit(field, start, restricted_equilibria(field), opts);
}

namespace {

/// b - a folded into (-pi, pi].
double periodic_delta(double a, double b) {
  double d = std::remainder(b - a, 2.0 * kPi);
  return d;
}

double point_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double vx = bx - ax, vy = by - ay;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * vx), py - (ay + t * vy));
}

}  // namespace

LimitSet limit_set_estimate(const Trajectory& traj, LimitDirection direction,
                            const LimitSetOptions& opts) {
  LimitSet out;
  const auto& s = traj.samples;
  if (s.size() < 2) {
    if (!s.empty()) {
      out.kind = LimitSet::Kind::Point;
      out.location = {s[0].x, s[0].y, s[0].z};
      out.distance_to_z = traj.on_z ? 0.0 : std::exp(s[0].log_dist);
    }
    return out;
  }
  const bool backward = s.back().t < s.front().t;
  if ((direction == LimitDirection::Alpha) != backward)
    throw SpecError("alpha-limit needs a backward trajectory and omega-limit a forward one");

  const double t_end = s.back().t;
  const double span = std::abs(t_end - s.front().t);
  std::size_t first = s.size() - 1;
  while (first > 0 && std::abs(t_end - s[first - 1].t) <= opts.tail_fraction * span) --first;
  if (s.size() - first < opts.min_samples) first = s.size() > opts.min_samples ? s.size() - opts.min_samples : 0;

  const Sample& ref = s[first];
  out.distance_to_z = traj.on_z ? 0.0 : std::exp(s.back().log_dist);
  double hmin = ref.H, hmax = ref.H;
  double diameter = 0.0;
  for (std::size_t i = first; i < s.size(); ++i) {
    const double dz = s[i].z - s.back().z;
    diameter = std::max(diameter, std::hypot(torus_distance(s[i].x, s[i].y, s.back().x, s.back().y), dz));
    hmin = std::min(hmin, s[i].H);
    hmax = std::max(hmax, s[i].H);
  }
  out.diameter = diameter;
  out.thickness = hmax - hmin;
  if (diameter < opts.point_tol) {
    out.kind = LimitSet::Kind::Point;
    out.location = {s.back().x, s.back().y, s.back().z};
    return out;
  }

  // Closure of the (x, y) projection: unwrap the tail relative to its start,
  // wait until it has moved away, then look for a segment passing back by it.
  out.location = {ref.x, ref.y, ref.z};
  double ux = 0.0, uy = 0.0;  // unwrapped offset of the current sample from ref
  bool departed = false;
  double px = 0.0, py = 0.0;
  for (std::size_t i = first + 1; i < s.size(); ++i) {
    const double nx = ux + periodic_delta(s[i - 1].x, s[i].x);
    const double ny = uy + periodic_delta(s[i - 1].y, s[i].y);
    px = ux;
    py = uy;
    ux = nx;
    uy = ny;
    if (!departed) {
      departed = std::hypot(ux, uy) > 10.0 * opts.curve_tol;
      continue;
    }
    // The closed orbit may wind around the torus: compare with every lattice
    // image of the start point near the current segment.
    const double cx = std::round(ux / (2.0 * kPi)) * 2.0 * kPi;
    const double cy = std::round(uy / (2.0 * kPi)) * 2.0 * kPi;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        const double qx = cx + a * 2.0 * kPi, qy = cy + b * 2.0 * kPi;
        if (point_segment_distance(qx, qy, px, py, ux, uy) < opts.curve_tol &&
            out.thickness < opts.thickness_tol) {
          out.kind = LimitSet::Kind::ClosedCurve;
          out.period = std::abs(s[i].t - ref.t);
          return out;
        }
      }
    }
  }
  out.kind = LimitSet::Kind::Unresolved;
  return out;
}

LimitSet limit_set_estimate(const AnyField& field, const Trajectory& traj, LimitDirection direction,
                            const LimitSetOptions& opts, double continuation) {
  const bool on_z_end =
      traj.termination == Termination::ZFloor || traj.termination == Termination::ZCeiling;
  if (!on_z_end || traj.samples.empty()) return limit_set_estimate(traj, direction, opts);
  const Sample& end = traj.back();
  const double comp =
      traj.termination == Termination::ZFloor ? traj.lower_component : traj.upper_component;
  IntegrateOptions io;
  io.on_z = true;
  const double sign = direction == LimitDirection::Omega ? 1.0 : -1.0;
  const Trajectory on_z = integrate(field, Vec3{end.x, end.y, comp}, end.t, end.t + sign * continuation, io);
  LimitSet out = limit_set_estimate(on_z, direction, opts);
  out.distance_to_z = std::exp(end.log_dist);
  out.location[2] = comp;
  return out;
}

}  // namespace bbeltrami
