#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "bbeltrami/census.hpp"
#include "bbeltrami/errors.hpp"

using namespace bbeltrami;

namespace {

constexpr double kPi = std::numbers::pi;

std::array<Vec3, 3> fd_jacobian(const AnyField& f, const Vec3& p, double h = 1e-5) {
  std::array<Vec3, 3> J{};
  for (int c = 0; c < 3; ++c) {
    Vec3 a = p, b = p;
    a[c] += h;
    b[c] -= h;
    const Vec3 fa = eval_field(f, a), fb = eval_field(f, b);
    for (int r = 0; r < 3; ++r) J[r][c] = (fa[r] - fb[r]) / (2 * h);
  }
  return J;
}

std::vector<EquilibriumRecord> records_of(const AnyField& f) {
  return classify_equilibria(f, SurfaceMetric::flat(), morse_audit(planar_part(f).Xz));
}

}  // namespace

TEST_CASE("b-ABC equilibrium over p1") {
  const AnyField f = GlobalTorusField::babc(1, 2);
  const auto recs = records_of(f);
  REQUIRE(recs.size() == 8);
  const EquilibriumRecord* p1 = nullptr;
  for (const auto& r : recs)
    if (r.component == 0.0 && torus_distance(r.x, r.y, 0.0, kPi / 2) < 1e-12) p1 = &r;
  REQUIRE(p1 != nullptr);
  CHECK(p1->H == doctest::Approx(-3.0));
  CHECK(p1->lambda_z == doctest::Approx(3.0));
  CHECK(p1->hessian_det == doctest::Approx(2.0));  // Hess H = diag(B cos x, C sin y) = diag(1, 2)
  CHECK(p1->morse_index == CriticalKind::Min);
  CHECK(p1->case_tag == 4);
  // On {z = pi} the same point has H = +3 and is a maximum of that H.
  for (const auto& r : recs)
    if (r.component == kPi && r.equilibrium == p1->equilibrium) {
      CHECK(r.H == doctest::Approx(3.0));
      CHECK(r.morse_index == CriticalKind::Max);
      CHECK(r.case_tag == 3);
    }
}

TEST_CASE("Jacobian identities at every equilibrium") {
  for (int mu : {1, 2, 5, 25}) {
    const auto basis = enumerate_eigenspace(mu);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const TrigPolynomial xz = sample_eigenfunction(basis, seed);
      const MorseAudit audit = morse_audit(xz, std::max(64, 16 * xz.max_abs_wavenumber()));
      if (!audit.is_morse || !audit.zero_set_regular) continue;
      const double lambda = std::sqrt(double(mu));
      for (const AnyField& f : {AnyField(SymmetricBField::from_hamiltonian(lambda, xz)),
                                AnyField(GlobalTorusField::globally_symmetric(lambda, xz))}) {
        for (const auto& r : classify_equilibria(f, SurfaceMetric::flat(), audit)) {
          const auto J = fd_jacobian(f, {r.x, r.y, r.component});
          const auto E = exact_jacobian(f, {r.x, r.y, r.component});
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              CHECK(std::abs(r.jacobian[i][j] - J[i][j]) <= 1e-6);
              CHECK(std::abs(r.jacobian[i][j] - E[i][j]) <= 1e-12);
            }
          CHECK(std::abs(r.lambda_z + r.H) <= 1e-8);
          CHECK(r.jacobian[0][0] + r.jacobian[1][1] == doctest::Approx(0.0));
          const double det = r.jacobian[2][2] * (r.jacobian[0][0] * r.jacobian[1][1] -
                                                 r.jacobian[0][1] * r.jacobian[1][0]);
          CHECK(std::abs(det - r.predicted_det) <= 1e-6 * std::abs(r.predicted_det));
          // Case tag against the eigenvalue sign pattern.
          const bool real_pair = std::abs(r.eigenvalues[0].imag()) < 1e-12;
          CHECK(real_pair == (r.morse_index == CriticalKind::Saddle));
          if (real_pair) CHECK(r.eigenvalues[0].real() * r.eigenvalues[1].real() < 0);
          const int expect = (r.morse_index == CriticalKind::Saddle ? 1 : 3) + (r.lambda_z > 0 ? 1 : 0);
          CHECK(r.case_tag == expect);
        }
      }
    }
  }
}

TEST_CASE("manifold seeds") {
  const AnyField f = SymmetricBField::from_hamiltonian(std::sqrt(5.0), sample_eigenfunction(enumerate_eigenspace(5), 4));
  const auto& xz = std::get<SymmetricBField>(f).Xz();
  for (const auto& r : records_of(f)) {
    const bool saddle = r.morse_index == CriticalKind::Saddle;
    CHECK(r.seeds.size() == (saddle ? 18u : 2u));
    for (const auto& s : r.seeds) {
      CHECK(s.point[2] != 0.0);
      CHECK(std::abs(s.point[2]) <= 1e-4);
      CHECK(s.stable == (r.lambda_z < 0));
      // Seeds lie on the level set of the first integral through p.
      CHECK(std::abs(xz(s.point[0], s.point[1]) - xz(r.x, r.y)) < 1e-13);
    }
  }
}

TEST_CASE("classifyEquilibria rejects non-Morse audits") {
  const AnyField cosx = SymmetricBField::from_hamiltonian(1.0, TrigPolynomial::single(1, 0, Phase::Cos));
  CHECK_THROWS_AS(records_of(cosx), SpecError);
  const AnyField abc11 = GlobalTorusField::babc(1, 1);
  CHECK_THROWS_AS(records_of(abc11), SpecError);
  CHECK_THROWS_AS(escape_census(cosx, {}), SpecError);
}

TEST_CASE("b-ABC census finds the eight vertical singular periodic orbits") {
  const AnyField f = GlobalTorusField::babc(1, 2);
  const CensusReport rep = escape_census(f, records_of(f));
  REQUIRE(rep.singular_periodic_pairs.size() == 8);
  CHECK(rep.bound_met);
  CHECK(rep.inconclusive == 0);
  CHECK(rep.z_components == 2);
  std::set<std::pair<int, int>> seen;  // (equilibrium index, region)
  const std::vector<std::pair<double, double>> pts{{0, kPi / 2}, {0, 3 * kPi / 2}, {kPi, kPi / 2}, {kPi, 3 * kPi / 2}};
  for (const auto& p : rep.singular_periodic_pairs) {
    CHECK(p.p_minus[0] == p.p_plus[0]);
    CHECK(p.p_minus[1] == p.p_plus[1]);
    CHECK(p.p_minus[2] != p.p_plus[2]);
    double best = 1e9;
    for (auto [x, y] : pts) best = std::min(best, torus_distance(p.p_minus[0], p.p_minus[1], x, y));
    CHECK(best < 1e-4);
    // H is constant on the connecting orbit: |Xz| agrees at both ends.
    const double xz = 2 * std::sin(p.p_minus[1]) + std::cos(p.p_minus[0]);
    // Direction: Xz > 0 sends z from 0 to pi on (0, pi) and from 0 (= 2 pi) to pi on (pi, 2 pi).
    CHECK(p.p_minus[2] == (xz > 0 ? 0.0 : kPi));
    const auto& res = rep.results[p.trajectory];
    seen.insert({res.verdict.forward.equilibrium, p.region});
  }
  CHECK(seen.size() == 8);
}

TEST_CASE("sampled mu = 1 fields meet the escape bound") {
  const auto basis = enumerate_eigenspace(1);
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const AnyField f = SymmetricBField::from_hamiltonian(1.0, sample_eigenfunction(basis, seed));
    const CensusReport rep = escape_census(f, records_of(f));
    CHECK(rep.escape_bound == 4);
    CHECK(rep.bound_met);
    CHECK(rep.escape_orbits.size() >= rep.equilibria.size());
  }
}

TEST_CASE("globally symmetric fields have two vertical singular periodic orbits") {
  const TrigPolynomial H = TrigPolynomial::single(0, 1, Phase::Sin, -2.0) + TrigPolynomial::single(1, 0, Phase::Cos, -1.0);
  const GlobalSpoResult r = globally_symmetric_spo(GlobalTorusField::globally_symmetric(1.0, H));
  CHECK(r.min_value == doctest::Approx(-3.0));
  CHECK(r.max_value == doctest::Approx(3.0));
  CHECK(torus_distance(r.start_min[0], r.start_min[1], 0.0, kPi / 2) < 1e-10);
  CHECK(torus_distance(r.start_max[0], r.start_max[1], kPi, 3 * kPi / 2) < 1e-10);
  CHECK(r.over_min.kind == VerdictKind::SingularPeriodic);
  CHECK(r.over_max.kind == VerdictKind::SingularPeriodic);

  const auto basis = enumerate_eigenspace(4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = GlobalTorusField::globally_symmetric(2.0, sample_eigenfunction(basis, seed));
    const GlobalSpoResult s = globally_symmetric_spo(g);
    CHECK(s.min_value < 0.0);
    CHECK(s.max_value > 0.0);
  }
  CHECK_THROWS_AS(globally_symmetric_spo(GlobalTorusField::globally_symmetric(1.0, TrigPolynomial())), SpecError);
}
