#pragma once

#include <vector>

#include "bbeltrami/field.hpp"
#include "bbeltrami/metric.hpp"

namespace bbeltrami {

/// Max-norm residuals of the split-coordinate b-Beltrami system on {z = 0}:
///   normal:  lambda sqrt(det h) Xz = -d_y(h11 Xx + h12 Xy) + d_x(h12 Xx + h22 Xy)
///   x:      -lambda sqrt(det h) Xy =  d_x Xz
///   y:       lambda sqrt(det h) Xx =  d_y Xz
/// (the z d_z terms vanish for z-independent components).
struct BeltramiResidual {
  double normal = 0.0;
  double x = 0.0;
  double y = 0.0;

  double max() const;
};

BeltramiResidual beltrami_residual(const SymmetricBField& field, const SurfaceMetric& metric,
                                   int grid_n);

/// Max over the grid of |div X| with respect to the b-volume
/// sqrt(det h) dx dy dz/z.  For X = Xx d_x + Xy d_y + z Xz d_z:
///   div X = (1/sqrt det h) [d_x(sqrt det h Xx) + d_y(sqrt det h Xy)] + z d_z Xz,
/// the z-weight of the volume cancels the z-factor of the normal component.
double divergence_residual(const SymmetricBField& field, const SurfaceMetric& metric,
                           int grid_n);
double divergence_residual(const SymmetricBField& field, int grid_n);

struct ContactReport {
  /// min |alpha ^ d alpha / mu_g| over the grid and the sampled z levels.
  double min_density = 0.0;
  double min_norm_sq = 0.0;
  /// 1/|X|^2 at the grid nodes (row-major, i = x index); Reeb field = this * X.
  std::vector<double> reeb_scale;
  int grid_n = 0;
};

/// Contact condition for alpha = g(X, .), sampled on grid_n^2 nodes at
/// z in {0, eps/2, -eps/2}.  Throws CheckError ("field vanishes as a
/// b-section") if |X|_g^2 < 1e-8 at any node.
ContactReport contact_check(const SymmetricBField& field, const SurfaceMetric& metric,
                            int grid_n);

}  // namespace bbeltrami
