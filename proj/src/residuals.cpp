#include "bbeltrami/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bbeltrami/errors.hpp"

namespace bbeltrami {

namespace {

constexpr double kNonvanishingTol = 1e-8;

void require_grid(int grid_n) {
  if (grid_n < 8) throw SpecError("gridN must be at least 8");
}

}  // namespace

double BeltramiResidual::max() const { return std::max({normal, x, y}); }

BeltramiResidual beltrami_residual(const SymmetricBField& field, const SurfaceMetric& metric,
                                   int grid_n) {
  require_grid(grid_n);
  const double h = 2.0 * std::numbers::pi / grid_n;
  const double lambda = field.lambda();
  BeltramiResidual r;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double x = i * h, y = j * h;
      const MetricJet g = metric.jet(x, y);
      const Jet u = field.Xx().jet(x, y);
      const Jet v = field.Xy().jet(x, y);
      const Jet w = field.Xz().jet(x, y);
      const double root = std::sqrt(g.det());
      // alpha_x = h11 Xx + h12 Xy, alpha_y = h12 Xx + h22 Xy
      const double dy_ax = g.h11_y * u.f + g.h11 * u.fy + g.h12_y * v.f + g.h12 * v.fy;
      const double dx_ay = g.h12_x * u.f + g.h12 * u.fx + g.h22_x * v.f + g.h22 * v.fx;
      r.normal = std::max(r.normal, std::abs(lambda * root * w.f - (-dy_ax + dx_ay)));
      r.x = std::max(r.x, std::abs(-lambda * root * v.f - w.fx));
      r.y = std::max(r.y, std::abs(lambda * root * u.f - w.fy));
    }
  }
  return r;
}

double divergence_residual(const SymmetricBField& field, const SurfaceMetric& metric,
                           int grid_n) {
  require_grid(grid_n);
  const double h = 2.0 * std::numbers::pi / grid_n;
  double worst = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double x = i * h, y = j * h;
      const MetricJet g = metric.jet(x, y);
      const Jet u = field.Xx().jet(x, y);
      const Jet v = field.Xy().jet(x, y);
      // d(sqrt det)/sqrt det = d det / (2 det); z d_z Xz = 0 (Xz independent of z).
      const double d = g.det();
      const double div = u.fx + v.fy + (g.det_x() * u.f + g.det_y() * v.f) / (2.0 * d);
      worst = std::max(worst, std::abs(div));
    }
  }
  return worst;
}

double divergence_residual(const SymmetricBField& field, int grid_n) {
  return divergence_residual(field, SurfaceMetric::flat(), grid_n);
}

ContactReport contact_check(const SymmetricBField& field, const SurfaceMetric& metric,
                            int grid_n) {
  require_grid(grid_n);
  const double h = 2.0 * std::numbers::pi / grid_n;
  ContactReport rep;
  rep.grid_n = grid_n;
  rep.min_density = std::numeric_limits<double>::infinity();
  rep.min_norm_sq = std::numeric_limits<double>::infinity();
  rep.reeb_scale.assign(static_cast<std::size_t>(grid_n) * grid_n, 0.0);
  const double eps = field.eps();
  for (const double z : {0.0, 0.5 * eps, -0.5 * eps}) {
    for (int i = 0; i < grid_n; ++i) {
      for (int j = 0; j < grid_n; ++j) {
        const double x = i * h, y = j * h;
        const Vec3 X = eval_field(field, {x, y, z});
        // b-frame component along z d_z is X^z / z = Xz; at z = 0 read it directly.
        const double xz_b = z == 0.0 ? field.Xz()(x, y) : X[2] / z;
        const MetricJet g = metric.jet(x, y);
        const double norm_sq = g.h11 * X[0] * X[0] + 2.0 * g.h12 * X[0] * X[1] +
                               g.h22 * X[1] * X[1] + xz_b * xz_b;
        if (norm_sq < kNonvanishingTol) {
          std::ostringstream os;
          os << "field vanishes as a b-section at (" << x << ", " << y << ", " << z
             << "): |X|^2 = " << norm_sq;
          throw CheckError(os.str());
        }
        const Jet u = field.Xx().jet(x, y);
        const Jet v = field.Xy().jet(x, y);
        const Jet w = field.Xz().jet(x, y);
        const double a = g.h11 * u.f + g.h12 * v.f;
        const double b = g.h12 * u.f + g.h22 * v.f;
        const double dy_a = g.h11_y * u.f + g.h11 * u.fy + g.h12_y * v.f + g.h12 * v.fy;
        const double dx_b = g.h12_x * u.f + g.h12 * u.fx + g.h22_x * v.f + g.h22 * v.fx;
        // alpha ^ d alpha = [a d_y Xz - b d_x Xz + Xz (d_x b - d_y a)] dx^dy^dz/z
        const double density = (a * w.fy - b * w.fx + w.f * (dx_b - dy_a)) / std::sqrt(g.det());
        rep.min_density = std::min(rep.min_density, std::abs(density));
        rep.min_norm_sq = std::min(rep.min_norm_sq, norm_sq);
        if (z == 0.0) rep.reeb_scale[static_cast<std::size_t>(i) * grid_n + j] = 1.0 / norm_sq;
      }
    }
  }
  return rep;
}

}  // namespace bbeltrami
