#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "bbeltrami/dynamics.hpp"
#include "bbeltrami/field.hpp"
#include "bbeltrami/metric.hpp"
#include "bbeltrami/spectral.hpp"

namespace bbeltrami {

/// Start point for an invariant-manifold orbit.
struct ManifoldSeed {
  Vec3 point{};
  /// Unit displacement from the equilibrium (in the chart where it was placed).
  Vec3 direction{};
  /// True for seeds on a stable manifold (classified mainly by their forward end).
  bool stable = true;
  /// On the vertical line over p (false: on the circle in a 2-dim manifold).
  bool vertical = true;
};

/// Zero of the field on a Z component.
struct EquilibriumRecord {
  double x = 0.0, y = 0.0;
  /// Height of the Z component: 0, or pi for the second component of T^3.
  double component = 0.0;
  /// Index into the list of restricted-field zeros (shared by both components).
  int equilibrium = -1;
  /// Exceptional Hamiltonian of this component at p: -phi'(c) Xz(p).
  double H = 0.0;
  /// Morse index of H (flips between min and max across components).
  CriticalKind morse_index = CriticalKind::Degenerate;
  double hessian_det = 0.0;
  std::array<Vec3, 3> jacobian{};
  /// In-plane pair, then the normal eigenvalue lambda_z = -H.
  std::array<std::complex<double>, 3> eigenvalues{};
  double lambda_z = 0.0;
  /// -Hess H(p) H(p) / (lambda^2 det h(p)).
  double predicted_det = 0.0;
  /// 1: saddle, H > 0 (2-dim stable)   2: saddle, H < 0 (2-dim unstable)
  /// 3: extremum, H > 0 (1-dim stable) 4: extremum, H < 0 (1-dim unstable)
  int case_tag = 0;
  std::vector<ManifoldSeed> seeds;
};

struct SeedOptions {
  double delta = 1e-4;
  int circle_seeds = 16;
};

/// Equilibria of the field on every Z component with their exact Jacobian,
/// eigenvalues, case tag and manifold seeds.  The in-plane block is
///   (1/(lambda sqrt det h)) [[-H_xy, -H_yy], [H_xx, H_xy]]  (H = -Xz)
/// and lambda_z = phi'(c) Xz(p).  Throws SpecError unless the audit is Morse
/// with a regular zero set.
std::vector<EquilibriumRecord> classify_equilibria(const AnyField& field,
                                                   const SurfaceMetric& metric,
                                                   const MorseAudit& audit,
                                                   const SeedOptions& seeds = {});

struct CensusOptions {
  ClassifyOptions classify;
  /// Inconclusive seeds are re-run once at this multiple of the horizon.
  double rerun_factor = 10.0;
};

struct SeedResult {
  std::size_t record = 0;
  ManifoldSeed seed;
  OrbitVerdict verdict;
  bool rerun = false;
};

struct SingularPeriodicPair {
  Vec3 p_minus{}, p_plus{};
  /// Region of M \ Z the orbit crosses (see OrbitVerdict::region).
  int region = 1;
  /// Index into CensusReport::results of the first trajectory realising it.
  std::size_t trajectory = 0;
  std::size_t multiplicity = 1;
};

struct CensusReport {
  std::vector<EquilibriumRecord> equilibria;
  std::vector<SeedResult> results;
  /// Indices into results with an escape verdict.
  std::vector<std::size_t> escape_orbits;
  std::vector<SingularPeriodicPair> singular_periodic_pairs;
  int z_components = 1;
  /// 2 + b_1(Z), b_1 = 2 per torus component.
  int escape_bound = 4;
  bool bound_met = false;
  int inconclusive = 0;
  int reruns = 0;
  double horizon = 0.0;
  static constexpr const char* counting_convention =
      "one escape orbit per verified seed trajectory; singular periodic orbits deduplicated by "
      "their (p-, p+) endpoints and the component of M \\ Z they cross";
};

CensusReport escape_census(const AnyField& field, const std::vector<EquilibriumRecord>& records,
                           const CensusOptions& opts = {});

struct GlobalSpoResult {
  double min_value = 0.0, max_value = 0.0;
  Vec3 start_min{}, start_max{};
  OrbitVerdict over_min, over_max;
};

/// Vertical orbits through (p, pi/2) over the global minimum and maximum of
/// the sin z coefficient; both must verify as singular periodic orbits.
/// Throws CheckError if either fails or if min < 0 < max does not hold.
GlobalSpoResult globally_symmetric_spo(const GlobalTorusField& field,
                                       const ClassifyOptions& opts = {});

}  // namespace bbeltrami
