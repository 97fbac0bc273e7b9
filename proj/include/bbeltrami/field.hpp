#pragma once

#include <array>
#include <variant>

#include "bbeltrami/trig_polynomial.hpp"

namespace bbeltrami {

using Vec3 = std::array<double, 3>;

/// Components of a b-field that do not depend on the normal coordinate:
///   X = Xx d_x + Xy d_y + phi(z) Xz d_z
/// with phi(z) = z (chart model) or sin z (global torus model).
/// The exceptional Hamiltonian on {z = 0} is H = -Xz.
struct PlanarPart {
  double lambda = 1.0;
  TrigPolynomial Xx, Xy, Xz;
};

/// Asymptotically symmetric b-Beltrami field on T^2 x (-eps, eps) for the
/// b-flat metric dz^2/z^2 + dx^2 + dy^2:
///   X = (1/lambda) d_y Xz d_x - (1/lambda) d_x Xz d_y + z Xz d_z.
class SymmetricBField {
 public:
  /// Throws SpecError for lambda == 0, eps <= 0, or when Xz has a mode with
  /// k1^2 + k2^2 != lambda^2.
  static SymmetricBField from_hamiltonian(double lambda, const TrigPolynomial& Xz,
                                          double eps = 1.0);

  /// Unchecked construction from arbitrary components (perturbation studies).
  static SymmetricBField from_components(double lambda, TrigPolynomial Xx, TrigPolynomial Xy,
                                         TrigPolynomial Xz, double eps = 1.0);

  double lambda() const { return part_.lambda; }
  double eps() const { return eps_; }
  const TrigPolynomial& Xx() const { return part_.Xx; }
  const TrigPolynomial& Xy() const { return part_.Xy; }
  const TrigPolynomial& Xz() const { return part_.Xz; }
  const PlanarPart& planar() const { return part_; }
  /// True when built by from_hamiltonian.
  bool constructed() const { return constructed_; }

  /// H = -Xz.
  TrigPolynomial hamiltonian() const { return -part_.Xz; }

 private:
  PlanarPart part_;
  double eps_ = 1.0;
  bool constructed_ = false;
};

/// Global field on T^3 with defining function sin z; Z = {z=0} u {z=pi}.
///   b-ABC:               X = C cos y d_x + B sin x d_y + (C sin y + B cos x) sin z d_z
///   globally symmetric:  X = (1/l) d_y H d_x - (1/l) d_x H d_y + H sin z d_z
/// Both are stored as a PlanarPart with Xz = the sin z coefficient.
class GlobalTorusField {
 public:
  enum class Kind { BABC, GloballySymmetric };

  static GlobalTorusField babc(double B, double C);
  /// Throws SpecError unless Delta H + lambda^2 H = 0 term by term.
  static GlobalTorusField globally_symmetric(double lambda, const TrigPolynomial& H);

  Kind kind() const { return kind_; }
  double B() const { return B_; }
  double C() const { return C_; }
  /// b-ABC with |B| == |C| has zeros of H on its critical set; kept but flagged.
  bool singular_claims_valid() const { return claims_valid_; }

  double lambda() const { return part_.lambda; }
  const TrigPolynomial& Xx() const { return part_.Xx; }
  const TrigPolynomial& Xy() const { return part_.Xy; }
  const TrigPolynomial& Xz() const { return part_.Xz; }
  const PlanarPart& planar() const { return part_; }

  /// Exceptional Hamiltonian on {z = 0}: -Xz.  On {z = pi} it is +Xz.
  TrigPolynomial hamiltonian() const { return -part_.Xz; }

  /// The same planar data seen in the chart z -> small (sin z ~ z).
  SymmetricBField chart_field(double eps = 1.0) const;

 private:
  Kind kind_ = Kind::BABC;
  double B_ = 0.0, C_ = 0.0;
  bool claims_valid_ = true;
  PlanarPart part_;
};

using AnyField = std::variant<SymmetricBField, GlobalTorusField>;

const PlanarPart& planar_part(const AnyField& field);

/// (Xx, Xy, z Xz) for the chart model; throws CheckError if |z| >= eps.
Vec3 eval_field(const SymmetricBField& field, const Vec3& p);
/// (Xx, Xy, sin z Xz) on T^3.
Vec3 eval_field(const GlobalTorusField& field, const Vec3& p);
Vec3 eval_field(const AnyField& field, const Vec3& p);

/// Exact Jacobian DX at p from the trig representation (row i = d X_i).
std::array<Vec3, 3> exact_jacobian(const AnyField& field, const Vec3& p);

}  // namespace bbeltrami
