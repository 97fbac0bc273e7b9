#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bbeltrami/errors.hpp"
#include "bbeltrami/io.hpp"

using namespace bbeltrami;
using bbeltrami::io::json;

TEST_CASE("field JSON round trips") {
  const AnyField chart = SymmetricBField::from_hamiltonian(
      std::sqrt(5.0), sample_eigenfunction(enumerate_eigenspace(5), 1), 0.5);
  const AnyField abc = GlobalTorusField::babc(1, 2);
  const AnyField sym = GlobalTorusField::globally_symmetric(1.0, TrigPolynomial::single(0, 1, Phase::Sin, -2.0));
  for (const AnyField* f : {&chart, &abc, &sym}) {
    const json j = io::to_json(*f);
    const AnyField back = io::field_from_json(io::parse_json(j.dump(), "test"));
    CHECK(io::to_json(back) == j);
    CHECK(planar_part(back).Xz == planar_part(*f).Xz);
    CHECK(planar_part(back).Xx == planar_part(*f).Xx);
  }
}

TEST_CASE("field JSON errors name the offending field") {
  auto message = [](const std::string& text) {
    try {
      io::field_from_json(io::parse_json(text, "spec.json"));
    } catch (const SpecError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"lambda": 1, "Xz": [{"k": [1, 1], "phase": "cos", "amp": 1}]})").find("(1,1") != std::string::npos);
  CHECK(message(R"({"lambda": 1, "Xz": [{"k": [1], "phase": "cos"}]})").find("Xz[0].k") != std::string::npos);
  CHECK(message(R"({"lambda": 1, "Xz": [{"k": [1, 0], "phase": "tan"}]})").find("Xz[0].phase") != std::string::npos);
  CHECK(message(R"({"Xz": []})").find("lambda") != std::string::npos);
  CHECK(message("{\n  \"lambda\": 1,\n  \"Xz\": [,]\n}").find("line 3") != std::string::npos);
  CHECK(message(R"({"model": "bABD"})").find("unknown model") != std::string::npos);
}

TEST_CASE("metric JSON") {
  CHECK(io::metric_from_json(json{{"shear", 0.3}}).shear_amplitude() == 0.3);
  CHECK(io::metric_from_json(json{{"flat", true}}).is_flat());
  const json wavy = {{"h11", json::array({{{"k", {0, 0}}, {"phase", "cos"}, {"amp", 1.0}},
                                          {{"k", {1, 0}}, {"phase", "cos"}, {"amp", 0.3}}})},
                     {"h12", json::array()},
                     {"h22", json::array({{{"k", {0, 0}}, {"phase", "cos"}, {"amp", 1.0}}})}};
  const SurfaceMetric m = io::metric_from_json(wavy);
  CHECK(m.h11()(0.0, 0.0) == doctest::Approx(1.3));
  CHECK(io::to_json(m) == wavy);
  CHECK_THROWS_AS(io::metric_from_json(json{{"h11", json::array()}}), SpecError);
}

TEST_CASE("trig expressions") {
  using io::parse_trig_expression;
  CHECK(parse_trig_expression("cos x") == TrigPolynomial::single(1, 0, Phase::Cos));
  const TrigPolynomial f = parse_trig_expression("-2 sin y + cos(2x+y)");
  for (double x : {0.2, 1.9})
    for (double y : {0.4, 3.3}) CHECK(f(x, y) == doctest::Approx(-2 * std::sin(y) + std::cos(2 * x + y)));
  const TrigPolynomial g = parse_trig_expression("0.5*sin(x - 3y) + 1");
  CHECK(g(0.7, 0.1) == doctest::Approx(0.5 * std::sin(0.7 - 0.3) + 1));
  CHECK(parse_trig_expression("sin(-x)") == TrigPolynomial::single(1, 0, Phase::Sin, -1.0));
  CHECK_THROWS_AS(parse_trig_expression("tan x"), SpecError);
  CHECK_THROWS_AS(parse_trig_expression("cos(1.5x)"), SpecError);
  CHECK_THROWS_AS(parse_trig_expression(""), SpecError);
  CHECK_THROWS_AS(parse_trig_expression("cos(x"), SpecError);
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("census report schema and escape CSV") {
  const AnyField f = GlobalTorusField::babc(1, 2);
  const MorseAudit audit = morse_audit(planar_part(f).Xz);
  const CensusReport rep = escape_census(f, classify_equilibria(f, SurfaceMetric::flat(), audit));
  const json j = io::to_json(rep);
  CHECK(j["schemaVersion"] == io::kSchemaVersion);
  CHECK(j["countingConvention"].get<std::string>().find("endpoints") != std::string::npos);
  CHECK(j["counts"]["singularPeriodicOrbits"] == 8);
  CHECK(j["bound"]["met"] == true);
  CHECK(j["equilibria"].size() == 8);
  std::ostringstream csv;
  io::write_escape_csv(csv, rep);
  const std::string text = csv.str();
  CHECK(text.rfind("index,record,case", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == rep.escape_orbits.size() + 1);

  const json a = io::to_json(audit);
  CHECK(a["isMorse"] == true);
  CHECK(a["criticalPoints"].size() == 4);
}

TEST_CASE("trajectory CSV") {
  Trajectory t;
  t.samples = {{0.0, 1.0, 2.0, 0.5, -0.25, 0.0}, {0.1, 1.5, 2.5, 0.25, -0.25, 0.0}};
  std::ostringstream os;
  io::write_trajectory_csv(os, t);
  CHECK(os.str() == "t,x,y,z,H\n0,1,2,0.5,-0.25\n0.10000000000000001,1.5,2.5,0.25,-0.25\n");
}
