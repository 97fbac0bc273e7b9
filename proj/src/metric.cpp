#include "bbeltrami/metric.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bbeltrami/errors.hpp"

namespace bbeltrami {

SurfaceMetric::SurfaceMetric()
    : h11_(TrigPolynomial::constant(1.0)),
      h12_(),
      h22_(TrigPolynomial::constant(1.0)) {}

SurfaceMetric::SurfaceMetric(TrigPolynomial h11, TrigPolynomial h12, TrigPolynomial h22,
                             int validation_grid)
    : h11_(std::move(h11)), h12_(std::move(h12)), h22_(std::move(h22)) {
  flat_ = h11_ == TrigPolynomial::constant(1.0) && h12_.is_zero() &&
          h22_ == TrigPolynomial::constant(1.0);
  validate(validation_grid);
}

SurfaceMetric SurfaceMetric::shear(double s) {
  const TrigPolynomial cos_y = TrigPolynomial::single(0, 1, Phase::Cos);
  SurfaceMetric m(TrigPolynomial::constant(1.0), s * cos_y,
                  TrigPolynomial::constant(1.0) + (s * s) * (cos_y * cos_y));
  m.shear_ = s;
  return m;
}

MetricJet SurfaceMetric::jet(double x, double y) const {
  const Jet a = h11_.jet(x, y);
  const Jet b = h12_.jet(x, y);
  const Jet c = h22_.jet(x, y);
  return {a.f, b.f, c.f, a.fx, a.fy, b.fx, b.fy, c.fx, c.fy};
}

double SurfaceMetric::det(double x, double y) const {
  const double a = h11_(x, y), b = h12_(x, y), c = h22_(x, y);
  return a * c - b * b;
}

double SurfaceMetric::sqrt_det(double x, double y) const { return std::sqrt(det(x, y)); }

void SurfaceMetric::validate(int grid_n) const {
  const double h = 2.0 * std::numbers::pi / grid_n;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double x = i * h, y = j * h;
      if (h11_(x, y) <= 0.0 || det(x, y) <= 0.0) {
        std::ostringstream os;
        os << "metric is not positive-definite at grid node (" << x << ", " << y
           << "): h11=" << h11_(x, y) << " det=" << det(x, y);
        throw CheckError(os.str());
      }
    }
  }
}

}  // namespace bbeltrami
