#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bbeltrami/metric.hpp"
#include "bbeltrami/trig_polynomial.hpp"

namespace bbeltrami {

using SurfaceFunction = std::function<double(double, double)>;

/// Second-order finite-difference Laplace-Beltrami operator on a periodic
/// n x n grid of T^2,
///   Delta_h u = (1/s) [ d_x((h22 u_x - h12 u_y)/s) + d_y((h11 u_y - h12 u_x)/s) ],
///   s = sqrt(det h).
///
/// Assembled as minus the gradient of the discrete Dirichlet energy
///   1/2 sum_xedges A (D_x u)^2 + 1/2 sum_yedges C (D_y u)^2 - sum_corners B u_x u_y
/// with A = h22/s on x-edges, C = h11/s on y-edges and B = h12/s at cell
/// corners, then divided by s at the nodes.  Constants are annihilated
/// exactly and the operator is symmetric for the s-weighted inner product.
class DiscreteLaplaceBeltrami {
 public:
  /// Throws SpecError for n < 16 and CheckError for a non-positive-definite h.
  DiscreteLaplaceBeltrami(const SurfaceMetric& metric, int grid_n);

  int grid_n() const { return n_; }
  double spacing() const { return h_; }
  /// sqrt(det h) at the nodes, row-major with i the x index.
  std::span<const double> weights() const { return weight_; }

  std::vector<double> apply(std::span<const double> u) const;

  /// f sampled at the nodes (i h, j h).
  std::vector<double> sample(const SurfaceFunction& f) const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>((i + n_) % n_) * n_ + (j + n_) % n_;
  }

  int n_;
  double h_;
  std::vector<double> a_xedge_;   // (i + 1/2, j)
  std::vector<double> c_yedge_;   // (i, j + 1/2)
  std::vector<double> b_corner_;  // (i + 1/2, j + 1/2)
  std::vector<double> weight_;    // (i, j)
};

/// max_grid |Delta_h Xz + lambda^2 Xz| with the discrete operator.
double eigen_residual_check(const SurfaceFunction& xz, const SurfaceMetric& metric,
                            double lambda, int grid_n);
double eigen_residual_check(const TrigPolynomial& xz, const SurfaceMetric& metric,
                            double lambda, int grid_n);

/// max_grid |Delta Xz + lambda^2 Xz| using exact term-wise differentiation
/// (flat metric).
double analytic_eigen_residual(const TrigPolynomial& xz, double lambda, int grid_n);

/// f o phi for the shear diffeomorphism phi(x, y) = (x + s sin y, y) that
/// generates SurfaceMetric::shear(s).
SurfaceFunction shear_pullback(const TrigPolynomial& f, double s);

}  // namespace bbeltrami
