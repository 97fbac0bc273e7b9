#pragma once

#include "bbeltrami/trig_polynomial.hpp"

namespace bbeltrami {

/// Metric coefficients and their first derivatives at one point of T^2.
struct MetricJet {
  double h11, h12, h22;
  double h11_x, h11_y, h12_x, h12_y, h22_x, h22_y;

  double det() const { return h11 * h22 - h12 * h12; }
  double det_x() const { return h11_x * h22 + h11 * h22_x - 2.0 * h12 * h12_x; }
  double det_y() const { return h11_y * h22 + h11 * h22_y - 2.0 * h12 * h12_y; }
};

/// Riemannian metric h = h11 dx^2 + 2 h12 dx dy + h22 dy^2 on the torus, the
/// Z-part of an asymptotically exact b-metric dz^2/z^2 + h.
class SurfaceMetric {
 public:
  /// Flat metric dx^2 + dy^2.
  SurfaceMetric();
  /// Validates positive-definiteness on a validation_grid^2 grid.
  SurfaceMetric(TrigPolynomial h11, TrigPolynomial h12, TrigPolynomial h22,
                int validation_grid = 64);

  static SurfaceMetric flat() { return {}; }

  /// Pullback of the flat metric by phi(x, y) = (x + s sin y, y):
  ///   h = dx^2 + 2 s cos y dx dy + (1 + s^2 cos^2 y) dy^2,  det h = 1.
  /// If f is a flat eigenfunction then f o phi is a Delta_h eigenfunction with
  /// the same eigenvalue.
  static SurfaceMetric shear(double s);

  const TrigPolynomial& h11() const { return h11_; }
  const TrigPolynomial& h12() const { return h12_; }
  const TrigPolynomial& h22() const { return h22_; }

  bool is_flat() const { return flat_; }
  /// Shear amplitude when built by shear(), 0 otherwise.
  double shear_amplitude() const { return shear_; }

  MetricJet jet(double x, double y) const;
  double det(double x, double y) const;
  double sqrt_det(double x, double y) const;

  /// Throws CheckError naming the first grid node where h11 <= 0 or det <= 0.
  void validate(int grid_n) const;

 private:
  TrigPolynomial h11_, h12_, h22_;
  bool flat_ = true;
  double shear_ = 0.0;
};

}  // namespace bbeltrami
