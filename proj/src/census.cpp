#include "bbeltrami/census.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbeltrami/errors.hpp"

namespace bbeltrami {

namespace {

constexpr double kPi = std::numbers::pi;

/// Move (x, y) along grad f onto the level f = target.
void project_to_level(const TrigPolynomial& f, double target, double& x, double& y) {
  for (int it = 0; it < 4; ++it) {
    const Jet j = f.jet(x, y);
    const double g2 = j.fx * j.fx + j.fy * j.fy;
    if (g2 == 0.0) return;
    const double s = (target - j.f) / g2;
    x += s * j.fx;
    y += s * j.fy;
  }
}

double wrap_z(double z, bool global) { return global ? wrap_angle(z) : z; }

}  // namespace

std::vector<EquilibriumRecord> classify_equilibria(const AnyField& field,
                                                   const SurfaceMetric& metric,
                                                   const MorseAudit& audit,
                                                   const SeedOptions& seed_opts) {
  if (!audit.is_morse) throw SpecError("classifyEquilibria requires a Morse audit");
  if (!audit.zero_set_regular)
    throw SpecError("classifyEquilibria requires a regular zero set (critical value 0 of Xz)");

  const PlanarPart& part = planar_part(field);
  const bool global = std::holds_alternative<GlobalTorusField>(field);
  const std::vector<double> components = global ? std::vector<double>{0.0, kPi}
                                                : std::vector<double>{0.0};
  const double lambda = part.lambda;
  const double delta = seed_opts.delta;

  std::vector<EquilibriumRecord> out;
  for (double c : components) {
    const double phi_prime = global ? std::cos(c) : 1.0;
    for (std::size_t e = 0; e < audit.critical_points.size(); ++e) {
      const CriticalPoint& cp = audit.critical_points[e];
      EquilibriumRecord r;
      r.x = cp.x;
      r.y = cp.y;
      r.component = c;
      r.equilibrium = static_cast<int>(e);

      const Jet xz = part.Xz.jet(cp.x, cp.y);
      // H on {z = 0} is -Xz; the block is written with that H on every component.
      const double hxx = -xz.fxx, hxy = -xz.fxy, hyy = -xz.fyy;
      const double sd = metric.sqrt_det(cp.x, cp.y);
      const double s = 1.0 / (lambda * sd);
      r.H = -phi_prime * xz.f;
      r.lambda_z = phi_prime * xz.f;
      r.hessian_det = hxx * hyy - hxy * hxy;
      r.jacobian = {Vec3{-s * hxy, -s * hyy, 0.0}, Vec3{s * hxx, s * hxy, 0.0},
                    Vec3{0.0, 0.0, r.lambda_z}};
      r.predicted_det = -r.hessian_det * r.H / (lambda * lambda * sd * sd);

      const double trace_h = phi_prime * (hxx + hyy);  // trace of Hess of this component's H
      if (r.hessian_det < 0.0) r.morse_index = CriticalKind::Saddle;
      else r.morse_index = trace_h > 0.0 ? CriticalKind::Min : CriticalKind::Max;
      const bool saddle = r.morse_index == CriticalKind::Saddle;
      r.case_tag = saddle ? (r.H > 0.0 ? 1 : 2) : (r.H > 0.0 ? 3 : 4);

      Eigen::Matrix2d block;
      block << r.jacobian[0][0], r.jacobian[0][1], r.jacobian[1][0], r.jacobian[1][1];
      Eigen::EigenSolver<Eigen::Matrix2d> es(block);
      std::array<std::complex<double>, 2> ev{es.eigenvalues()[0], es.eigenvalues()[1]};
      int order[2] = {0, 1};
      if (ev[1].real() < ev[0].real() || (ev[1].real() == ev[0].real() && ev[1].imag() < ev[0].imag()))
        std::swap(order[0], order[1]);
      r.eigenvalues = {ev[order[0]], ev[order[1]], std::complex<double>(r.lambda_z, 0.0)};

      const bool z_stable = r.lambda_z < 0.0;
      // Vertical seeds: p +/- delta z-hat in the chart model; the interval
      // midpoints over p in the global model (assigned to the z = 0 records).
      if (!global) {
        for (int side : {1, -1})
          r.seeds.push_back({Vec3{cp.x, cp.y, side * delta}, Vec3{0.0, 0.0, double(side)}, z_stable, true});
      } else if (c == 0.0) {
        r.seeds.push_back({Vec3{cp.x, cp.y, 0.5 * kPi}, Vec3{0.0, 0.0, 1.0}, z_stable, true});
        r.seeds.push_back({Vec3{cp.x, cp.y, 1.5 * kPi}, Vec3{0.0, 0.0, -1.0}, z_stable, true});
      }

      if (saddle) {
        // 2-dim manifold spanned by z-hat and the in-plane eigenvector with
        // the same stability as lambda_z.
        const int pick = z_stable ? order[0] : order[1];
        Eigen::Vector2d v = es.eigenvectors().col(pick).real();
        v.normalize();
        for (int j = 0; j < seed_opts.circle_seeds; ++j) {
          const double th = 2.0 * kPi * (j + 0.5) / seed_opts.circle_seeds;
          double x = cp.x + delta * std::cos(th) * v[0];
          double y = cp.y + delta * std::cos(th) * v[1];
          project_to_level(part.Xz, xz.f, x, y);
          const Vec3 dir{std::cos(th) * v[0], std::cos(th) * v[1], std::sin(th)};
          r.seeds.push_back({Vec3{wrap_angle(x), wrap_angle(y), wrap_z(c + delta * std::sin(th), global)},
                             dir, z_stable, false});
        }
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

CensusReport escape_census(const AnyField& field, const std::vector<EquilibriumRecord>& records,
                           const CensusOptions& opts) {
  if (records.empty()) throw SpecError("escape census needs at least one equilibrium");
  const bool global = std::holds_alternative<GlobalTorusField>(field);

  CensusReport report;
  report.equilibria = records;
  report.z_components = global ? 2 : 1;
  report.escape_bound = 2 + 2 * report.z_components;
  report.horizon = opts.classify.t_max;

  // Equilibrium list in audit order, so lock indices match the records.
  int n_eq = 0;
  for (const auto& r : records) n_eq = std::max(n_eq, r.equilibrium + 1);
  EquilibriumList eqs(static_cast<std::size_t>(n_eq));
  for (const auto& r : records) eqs[static_cast<std::size_t>(r.equilibrium)] = {r.x, r.y};

  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const auto& seed : records[i].seeds) {
      SeedResult res{i, seed, classify_orbit(field, seed.point, eqs, opts.classify), false};
      if (res.verdict.inconclusive && opts.rerun_factor > 1.0) {
        ClassifyOptions longer = opts.classify;
        longer.t_max *= opts.rerun_factor;
        res.verdict = classify_orbit(field, seed.point, eqs, longer);
        res.rerun = true;
        ++report.reruns;
      }
      if (res.verdict.inconclusive) ++report.inconclusive;
      report.results.push_back(std::move(res));
    }
  }

  for (std::size_t k = 0; k < report.results.size(); ++k) {
    const OrbitVerdict& v = report.results[k].verdict;
    if (v.kind == VerdictKind::EscapeForward || v.kind == VerdictKind::EscapeBackward) {
      report.escape_orbits.push_back(k);
    } else if (v.kind == VerdictKind::SingularPeriodic) {
      auto same = [&](const SingularPeriodicPair& p) {
        return p.p_minus == *v.p_minus && p.p_plus == *v.p_plus && p.region == v.region;
      };
      auto it = std::find_if(report.singular_periodic_pairs.begin(),
                             report.singular_periodic_pairs.end(), same);
      if (it != report.singular_periodic_pairs.end()) ++it->multiplicity;
      else report.singular_periodic_pairs.push_back({*v.p_minus, *v.p_plus, v.region, k, 1});
    }
  }
  report.bound_met = !report.singular_periodic_pairs.empty() ||
                     static_cast<int>(report.escape_orbits.size()) >= report.escape_bound;
  return report;
}

GlobalSpoResult globally_symmetric_spo(const GlobalTorusField& field, const ClassifyOptions& opts) {
  const TrigPolynomial& h = field.Xz();
  if (h.terms().empty()) throw SpecError("H is identically zero");
  const MorseAudit audit = morse_audit(h, std::max(64, 16 * h.max_abs_wavenumber()));
  if (audit.critical_points.empty()) throw CheckError("no critical points found for H");

  auto lo = std::min_element(audit.critical_points.begin(), audit.critical_points.end(),
                             [](const auto& a, const auto& b) { return a.value < b.value; });
  auto hi = std::max_element(audit.critical_points.begin(), audit.critical_points.end(),
                             [](const auto& a, const auto& b) { return a.value < b.value; });
  GlobalSpoResult out;
  out.min_value = lo->value;
  out.max_value = hi->value;
  if (!(out.min_value < 0.0 && 0.0 < out.max_value))
    throw CheckError("zero-mean violation: expected min H < 0 < max H");

  EquilibriumList eqs;
  for (const auto& c : audit.critical_points) eqs.emplace_back(c.x, c.y);
  const AnyField any = field;
  out.start_min = {lo->x, lo->y, 0.5 * kPi};
  out.start_max = {hi->x, hi->y, 0.5 * kPi};
  out.over_min = classify_orbit(any, out.start_min, eqs, opts);
  out.over_max = classify_orbit(any, out.start_max, eqs, opts);
  if (out.over_min.kind != VerdictKind::SingularPeriodic ||
      out.over_max.kind != VerdictKind::SingularPeriodic)
    throw CheckError("vertical orbit over a global extremum of H did not verify as singular periodic");
  return out;
}

}  // namespace bbeltrami
