#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bbeltrami/field.hpp"

namespace bbeltrami {

/// Coordinates used for the normal direction during integration.
///   Direct : z itself.
///   LogZ   : w = log|z| for the chart model; wdot = Xz(x, y).
///   LogTan : u = log tan(s/2), s = z - k pi in (0, pi), for the global model;
///            udot = (-1)^k Xz(x, y).
/// Both log charts turn the normal equation into a nonstiff one.
enum class Chart { Auto, Direct, LogZ, LogTan };

enum class Termination { TimeLimit, ZFloor, ZCeiling, ChartExit, EquilibriumLock };

std::string to_string(Chart chart);
std::string to_string(Termination reason);

struct Sample {
  double t, x, y, z;
  /// First-integral monitor H = -Xz(x, y).
  double H;
  /// log of the distance to the nearest component of Z (0 for on-Z runs).
  double log_dist;
};

struct Trajectory {
  std::vector<Sample> samples;
  Chart chart = Chart::Direct;
  /// +1 / -1 for z > 0 / z < 0 in the chart model; interval index k for the
  /// global model (z in (k pi, (k+1) pi)).
  int z_sign = 1;
  bool on_z = false;
  Termination termination = Termination::TimeLimit;
  /// Z component the start lies over: 0 or pi (global), 0 (chart).
  double lower_component = 0.0;
  double upper_component = 0.0;

  double max_h_drift() const;
  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }
};

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  Chart chart = Chart::Auto;
  /// Integrate the restricted 2D Hamiltonian field on Z (start must have
  /// z on Z: 0 for the chart model, 0 or pi for the global model).
  bool on_z = false;
  /// Stop once the distance to Z drops below this (0 disables).
  double z_floor = 1e-8;
  double max_step = 0.1;
  double initial_step = 1e-3;
  std::size_t max_steps = 20'000'000;
};

/// Adaptive Dormand-Prince 5(4) integration from start over [t0, t1]
/// (t1 < t0 integrates backward).  Throws CheckError on step-size
/// underflow; leaving the chart is reported in termination.
Trajectory integrate(const AnyField& field, const Vec3& start, double t0, double t1,
                     const IntegrateOptions& opts = {});

enum class VerdictKind { EscapeForward, EscapeBackward, SingularPeriodic, GeneralizedSPO, Regular };
std::string to_string(VerdictKind kind);

/// What happened at one end (forward or backward) of an orbit.
struct OrbitEnd {
  Termination termination = Termination::TimeLimit;
  /// Distance to Z fell below z_floor, or the recurrence rule fired.
  bool accumulates_on_z = false;
  bool locked = false;
  /// Index into the equilibrium list, -1 if none within endpoint_tol.
  int equilibrium = -1;
  double equilibrium_distance = 0.0;
  double restricted_speed = 0.0;
  /// Z component height (0 or pi) approached, when accumulates_on_z.
  double component = 0.0;
  Vec3 end_point{};
  double t_end = 0.0;
  /// Times t_k at which the distance to Z first drops below 10^-1, 10^-2, ...
  /// (or local minima under the recurrence rule).
  std::vector<double> visit_times;
};

struct OrbitVerdict {
  VerdictKind kind = VerdictKind::Regular;
  OrbitEnd forward, backward;
  /// Horizon exhausted with the orbit bounded away from Z and the chart edge.
  bool inconclusive = false;
  double horizon = 0.0;
  double rtol = 0.0;
  /// Connected piece of M \ Z traversed: sign of z (chart model) or the
  /// interval index k of z in (k pi, (k+1) pi) (global model).
  int region = 1;
  /// p- (alpha end) and p+ (omega end) for escape / singular periodic kinds.
  std::optional<Vec3> p_minus, p_plus;
};

struct ClassifyOptions {
  double t_max = 1e3;
  double rtol = 1e-10;
  double atol = 1e-12;
  double z_floor = 1e-8;
  double endpoint_tol = 1e-4;
  double lock_speed = 1e-3;
  int recurrence_minima = 5;
};

/// Zeros of the restricted field on Z, as (x, y) pairs.
using EquilibriumList = std::vector<std::pair<double, double>>;

/// Equilibria from a Morse audit of Xz (grid 64).
EquilibriumList restricted_equilibria(const AnyField& field);

OrbitVerdict classify_orbit(const AnyField& field, const Vec3& start,
                            const EquilibriumList& equilibria, const ClassifyOptions& opts = {});
OrbitVerdict classify_orbit(const AnyField& field, const Vec3& start,
                            const ClassifyOptions& opts = {});

/// Forward and backward trajectories used by classify_orbit.
struct OrbitPair {
  Trajectory forward, backward;
};
OrbitPair integrate_both_ways(const AnyField& field, const Vec3& start, const ClassifyOptions& opts);
/// Verdict from already integrated trajectories (pair from integrate_both_ways).
OrbitVerdict classify_trajectories(const AnyField& field, const OrbitPair& pair,
                                   const EquilibriumList& equilibria, const ClassifyOptions& opts);

enum class LimitDirection { Alpha, Omega };

struct LimitSet {
  enum class Kind { Point, ClosedCurve, Unresolved } kind = Kind::Unresolved;
  /// Point location, or the tail start for a closed curve.
  Vec3 location{};
  double diameter = 0.0;
  /// Distance from the tail end to Z.
  double distance_to_z = 0.0;
  double period = 0.0;
  /// Spread of H over the tail.
  double thickness = 0.0;
};
std::string to_string(LimitSet::Kind kind);

struct LimitSetOptions {
  double tail_fraction = 0.5;
  std::size_t min_samples = 16;
  double point_tol = 1e-4;
  double curve_tol = 1e-3;
  double thickness_tol = 1e-6;
};

/// traj must run in the matching time direction: backward for Alpha,
/// forward for Omega.
LimitSet limit_set_estimate(const Trajectory& traj, LimitDirection direction,
                            const LimitSetOptions& opts = {});

/// As above, but a trajectory that reached Z is continued on Z by the
/// restricted flow from its end point (the planar motion does not depend on
/// z, so that orbit carries the limit set) for `continuation` time units.
LimitSet limit_set_estimate(const AnyField& field, const Trajectory& traj, LimitDirection direction,
                            const LimitSetOptions& opts = {}, double continuation = 100.0);

}  // namespace bbeltrami
