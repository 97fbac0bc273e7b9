#include "bbeltrami/field.hpp"

#include <cmath>
#include <sstream>

#include "bbeltrami/errors.hpp"

namespace bbeltrami {

namespace {

void require_on_shell(double lambda, const TrigPolynomial& Xz) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw SpecError("lambda must be a nonzero finite number");
  const double shell = lambda * lambda;
  for (const auto& [m, a] : Xz.terms()) {
    if (std::abs(m.norm_sq() - shell) > 1e-9 * shell) {
      std::ostringstream os;
      os << "Xz is not an eigenfunction of the stated eigenvalue: mode (" << m.k1 << "," << m.k2
         << "," << to_string(m.phase) << ") has |k|^2 = " << m.norm_sq()
         << " but lambda^2 = " << shell;
      throw SpecError(os.str());
    }
  }
}

PlanarPart planar_from_xz(double lambda, const TrigPolynomial& Xz) {
  return {lambda, (1.0 / lambda) * Xz.dy(), (-1.0 / lambda) * Xz.dx(), Xz};
}

}  // namespace

SymmetricBField SymmetricBField::from_hamiltonian(double lambda, const TrigPolynomial& Xz,
                                                  double eps) {
  require_on_shell(lambda, Xz);
  if (!(eps > 0.0)) throw SpecError("chart half-width eps must be positive");
  SymmetricBField f;
  f.part_ = planar_from_xz(lambda, Xz);
  f.eps_ = eps;
  f.constructed_ = true;
  return f;
}

SymmetricBField SymmetricBField::from_components(double lambda, TrigPolynomial Xx,
                                                 TrigPolynomial Xy, TrigPolynomial Xz,
                                                 double eps) {
  if (lambda == 0.0) throw SpecError("lambda must be nonzero");
  if (!(eps > 0.0)) throw SpecError("chart half-width eps must be positive");
  SymmetricBField f;
  f.part_ = {lambda, std::move(Xx), std::move(Xy), std::move(Xz)};
  f.eps_ = eps;
  return f;
}

GlobalTorusField GlobalTorusField::babc(double B, double C) {
  GlobalTorusField f;
  f.kind_ = Kind::BABC;
  f.B_ = B;
  f.C_ = C;
  f.claims_valid_ = std::abs(B) != std::abs(C);
  TrigPolynomial Xz;
  Xz.add_term(0, 1, Phase::Sin, C).add_term(1, 0, Phase::Cos, B);
  f.part_ = planar_from_xz(1.0, Xz);
  return f;
}

GlobalTorusField GlobalTorusField::globally_symmetric(double lambda, const TrigPolynomial& H) {
  require_on_shell(lambda, H);
  GlobalTorusField f;
  f.kind_ = Kind::GloballySymmetric;
  f.part_ = planar_from_xz(lambda, H);
  return f;
}

SymmetricBField GlobalTorusField::chart_field(double eps) const {
  return SymmetricBField::from_hamiltonian(part_.lambda, part_.Xz, eps);
}

const PlanarPart& planar_part(const AnyField& field) {
  return std::visit([](const auto& f) -> const PlanarPart& { return f.planar(); }, field);
}

Vec3 eval_field(const SymmetricBField& field, const Vec3& p) {
  if (std::abs(p[2]) >= field.eps()) {
    std::ostringstream os;
    os << "point z=" << p[2] << " is outside the chart |z| < " << field.eps();
    throw CheckError(os.str());
  }
  return {field.Xx()(p[0], p[1]), field.Xy()(p[0], p[1]), p[2] * field.Xz()(p[0], p[1])};
}

Vec3 eval_field(const GlobalTorusField& field, const Vec3& p) {
  return {field.Xx()(p[0], p[1]), field.Xy()(p[0], p[1]),
          std::sin(p[2]) * field.Xz()(p[0], p[1])};
}

Vec3 eval_field(const AnyField& field, const Vec3& p) {
  return std::visit([&p](const auto& f) { return eval_field(f, p); }, field);
}

std::array<Vec3, 3> exact_jacobian(const AnyField& field, const Vec3& p) {
  const PlanarPart& part = planar_part(field);
  const Jet jx = part.Xx.jet(p[0], p[1]);
  const Jet jy = part.Xy.jet(p[0], p[1]);
  const Jet jz = part.Xz.jet(p[0], p[1]);
  double phi = p[2], dphi = 1.0;
  if (std::holds_alternative<GlobalTorusField>(field)) {
    phi = std::sin(p[2]);
    dphi = std::cos(p[2]);
  }
  return {Vec3{jx.fx, jx.fy, 0.0}, Vec3{jy.fx, jy.fy, 0.0},
          Vec3{phi * jz.fx, phi * jz.fy, dphi * jz.f}};
}

}  // namespace bbeltrami
