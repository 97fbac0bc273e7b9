#include "bbeltrami/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bbeltrami/errors.hpp"

namespace bbeltrami::io {

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number_at(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SpecError(where + ": missing field '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw SpecError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number_at(j, key, where) : fallback;
}

json opt_vec(const std::optional<Vec3>& v) { return v ? to_json(*v) : json(nullptr); }

json end_json(const OrbitEnd& e) {
  json j;
  j["termination"] = to_string(e.termination);
  j["accumulatesOnZ"] = e.accumulates_on_z;
  j["locked"] = e.locked;
  j["equilibrium"] = e.equilibrium;
  j["equilibriumDistance"] = e.equilibrium_distance;
  j["restrictedSpeed"] = e.restricted_speed;
  j["component"] = e.component;
  j["endPoint"] = to_json(e.end_point);
  j["tEnd"] = e.t_end;
  j["visitTimes"] = e.visit_times;
  return j;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(source + ": malformed JSON at " + line_col(text, e.byte ? e.byte - 1 : 0));
  }
}

json load_json_arg(const std::string& arg) {
  std::size_t first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return parse_json(arg, "inline JSON");
  std::ifstream in(arg);
  if (!in) throw SpecError("cannot open '" + arg + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), arg);
}

json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json to_json(const TrigPolynomial& f) {
  json arr = json::array();
  for (const auto& [m, a] : f.terms())
    arr.push_back({{"k", {m.k1, m.k2}}, {"phase", to_string(m.phase)}, {"amp", a}});
  return arr;
}

TrigPolynomial trig_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw SpecError(where + ": expected an array of terms");
  TrigPolynomial f;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const json& t = j[i];
    if (!t.is_object()) throw SpecError(w + ": expected an object");
    if (!t.contains("k") || !t["k"].is_array() || t["k"].size() != 2 ||
        !t["k"][0].is_number_integer() || !t["k"][1].is_number_integer())
      throw SpecError(w + ".k: expected an array of two integers");
    Phase phase = Phase::Cos;
    if (t.contains("phase")) {
      if (!t["phase"].is_string()) throw SpecError(w + ".phase: expected \"cos\" or \"sin\"");
      try {
        phase = phase_from_string(t["phase"].get<std::string>());
      } catch (const std::exception&) {
        throw SpecError(w + ".phase: expected \"cos\" or \"sin\"");
      }
    }
    f.add_term(t["k"][0].get<int>(), t["k"][1].get<int>(), phase, number_or(t, "amp", 1.0, w));
  }
  return f;
}

json to_json(const AnyField& field) {
  json j;
  if (const auto* s = std::get_if<SymmetricBField>(&field)) {
    j["lambda"] = s->lambda();
    j["Xz"] = to_json(s->Xz());
    j["eps"] = s->eps();
    return j;
  }
  const auto& g = std::get<GlobalTorusField>(field);
  if (g.kind() == GlobalTorusField::Kind::BABC) {
    j["model"] = "bABC";
    j["B"] = g.B();
    j["C"] = g.C();
  } else {
    j["model"] = "globallySymmetric";
    j["lambda"] = g.lambda();
    j["H"] = to_json(g.Xz());
  }
  return j;
}

AnyField field_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("field: expected a JSON object");
  if (j.contains("model")) {
    if (!j["model"].is_string()) throw SpecError("field.model: expected a string");
    const std::string model = j["model"].get<std::string>();
    if (model == "bABC") return GlobalTorusField::babc(number_at(j, "B", "field"), number_at(j, "C", "field"));
    if (model == "globallySymmetric") {
      if (!j.contains("H")) throw SpecError("field: missing field 'H'");
      return GlobalTorusField::globally_symmetric(number_at(j, "lambda", "field"),
                                                  trig_from_json(j["H"], "field.H"));
    }
    throw SpecError("field.model: unknown model '" + model + "' (bABC | globallySymmetric)");
  }
  if (!j.contains("Xz")) throw SpecError("field: missing field 'Xz'");
  return SymmetricBField::from_hamiltonian(number_at(j, "lambda", "field"),
                                           trig_from_json(j["Xz"], "field.Xz"),
                                           number_or(j, "eps", 1.0, "field"));
}

json to_json(const SurfaceMetric& metric) {
  if (metric.is_flat()) return {{"flat", true}};
  if (metric.shear_amplitude() != 0.0) return {{"shear", metric.shear_amplitude()}};
  return {{"h11", to_json(metric.h11())}, {"h12", to_json(metric.h12())}, {"h22", to_json(metric.h22())}};
}

SurfaceMetric metric_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("metric: expected a JSON object");
  if (j.contains("shear")) return SurfaceMetric::shear(number_at(j, "shear", "metric"));
  if (j.contains("flat") && !j.contains("h11")) return SurfaceMetric::flat();
  for (const char* key : {"h11", "h12", "h22"})
    if (!j.contains(key)) throw SpecError(std::string("metric: missing field '") + key + "'");
  return SurfaceMetric(trig_from_json(j["h11"], "metric.h11"), trig_from_json(j["h12"], "metric.h12"),
                       trig_from_json(j["h22"], "metric.h22"));
}

json to_json(const MorseAudit& audit) {
  json j;
  json pts = json::array();
  for (const auto& c : audit.critical_points)
    pts.push_back(json::array({c.x, c.y, c.value, c.hessian_det, to_string(c.kind)}));
  j["criticalPoints"] = pts;
  j["criticalPointColumns"] = {"x", "y", "value", "hessianDet", "kind"};
  j["counts"] = {{"min", audit.count(CriticalKind::Min)},
                 {"saddle", audit.count(CriticalKind::Saddle)},
                 {"max", audit.count(CriticalKind::Max)},
                 {"degenerate", audit.count(CriticalKind::Degenerate)}};
  j["eulerCharacteristic"] = audit.euler_characteristic();
  j["isMorse"] = audit.is_morse;
  j["zeroSetRegular"] = audit.zero_set_regular;
  j["minAbsCriticalValue"] = audit.min_abs_critical_value;
  j["minAbsHessianDet"] = audit.min_abs_hessian_det;
  j["tol"] = audit.tol;
  j["hessianTol"] = audit.hessian_tol;
  j["valueTol"] = audit.value_tol;
  j["gridN"] = audit.grid_n;
  return j;
}

json to_json(const OrbitVerdict& v) {
  json j;
  j["kind"] = to_string(v.kind);
  j["inconclusive"] = v.inconclusive;
  j["pMinus"] = opt_vec(v.p_minus);
  j["pPlus"] = opt_vec(v.p_plus);
  j["region"] = v.region;
  j["endpointDistances"] = {v.backward.equilibrium_distance, v.forward.equilibrium_distance};
  j["forward"] = end_json(v.forward);
  j["backward"] = end_json(v.backward);
  j["horizon"] = v.horizon;
  j["rtol"] = v.rtol;
  return j;
}

json to_json(const EquilibriumRecord& r) {
  json j;
  j["location"] = {r.x, r.y};
  j["component"] = r.component;
  j["equilibrium"] = r.equilibrium;
  j["H"] = r.H;
  j["morseIndex"] = to_string(r.morse_index);
  j["hessianDet"] = r.hessian_det;
  json jac = json::array();
  for (const auto& row : r.jacobian) jac.push_back(to_json(row));
  j["jacobian"] = jac;
  json ev = json::array();
  for (const auto& e : r.eigenvalues) ev.push_back({e.real(), e.imag()});
  j["eigenvalues"] = ev;
  j["lambdaZ"] = r.lambda_z;
  j["predictedDet"] = r.predicted_det;
  j["caseTag"] = r.case_tag;
  j["seedCount"] = r.seeds.size();
  return j;
}

json to_json(const CensusReport& r) {
  json j;
  j["schemaVersion"] = kSchemaVersion;
  j["countingConvention"] = CensusReport::counting_convention;
  json eq = json::array();
  for (const auto& e : r.equilibria) eq.push_back(to_json(e));
  j["equilibria"] = eq;
  json esc = json::array();
  for (auto k : r.escape_orbits) {
    const SeedResult& s = r.results[k];
    esc.push_back({{"result", k},
                   {"record", s.record},
                   {"seed", to_json(s.seed.point)},
                   {"verticalSeed", s.seed.vertical},
                   {"verdict", to_json(s.verdict)}});
  }
  j["escapeOrbits"] = esc;
  json spo = json::array();
  for (const auto& p : r.singular_periodic_pairs)
    spo.push_back({{"pMinus", to_json(p.p_minus)},
                   {"pPlus", to_json(p.p_plus)},
                   {"region", p.region},
                   {"trajectory", p.trajectory},
                   {"seed", to_json(r.results[p.trajectory].seed.point)},
                   {"multiplicity", p.multiplicity}});
  j["singularPeriodicPairs"] = spo;
  json kinds = json::object();
  for (auto kind : {VerdictKind::EscapeForward, VerdictKind::EscapeBackward, VerdictKind::SingularPeriodic,
                    VerdictKind::GeneralizedSPO, VerdictKind::Regular}) {
    int n = 0;
    for (const auto& s : r.results) n += s.verdict.kind == kind;
    kinds[to_string(kind)] = n;
  }
  j["counts"] = {{"seeds", r.results.size()},
                 {"escapeOrbits", r.escape_orbits.size()},
                 {"singularPeriodicOrbits", r.singular_periodic_pairs.size()},
                 {"verdicts", kinds},
                 {"inconclusive", r.inconclusive},
                 {"reruns", r.reruns}};
  j["bound"] = {{"zComponents", r.z_components},
                {"escapeBound", r.escape_bound},
                {"statement", "a singular periodic orbit or at least 2 + b1(Z) escape orbits"},
                {"met", r.bound_met}};
  j["horizon"] = r.horizon;
  return j;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y,z,H\n";
  for (const auto& s : traj.samples)
    out << fmt(s.t) << ',' << fmt(s.x) << ',' << fmt(s.y) << ',' << fmt(s.z) << ',' << fmt(s.H) << '\n';
}

void write_escape_csv(std::ostream& out, const CensusReport& r) {
  out << "index,record,case,eq_x,eq_y,component,seed_x,seed_y,seed_z,kind,end_x,end_y,end_z,t_end,endpoint_distance\n";
  for (auto k : r.escape_orbits) {
    const SeedResult& s = r.results[k];
    const EquilibriumRecord& e = r.equilibria[s.record];
    const OrbitEnd& end = s.verdict.kind == VerdictKind::EscapeForward ? s.verdict.forward : s.verdict.backward;
    out << k << ',' << s.record << ',' << e.case_tag << ',' << fmt(e.x) << ',' << fmt(e.y) << ','
        << fmt(e.component) << ',' << fmt(s.seed.point[0]) << ',' << fmt(s.seed.point[1]) << ','
        << fmt(s.seed.point[2]) << ',' << to_string(s.verdict.kind) << ',' << fmt(end.end_point[0]) << ','
        << fmt(end.end_point[1]) << ',' << fmt(end.end_point[2]) << ',' << fmt(end.t_end) << ','
        << fmt(end.equilibrium_distance) << '\n';
  }
}

namespace {

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : s_(text) {}

  TrigPolynomial parse() {
    TrigPolynomial f;
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
    for (;;) {
      term(sign, f);
      skip();
      if (pos_ == s_.size()) break;
      const char c = take();
      if (c != '+' && c != '-') fail("expected '+' or '-'", pos_ - 1);
      sign = c == '-' ? -1.0 : 1.0;
    }
    return f;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char take() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    return s_[pos_++];
  }
  [[noreturn]] void fail(const std::string& what, std::size_t at = std::string::npos) {
    if (at == std::string::npos) at = pos_;
    throw SpecError("expression '" + s_ + "': " + what + " at column " + std::to_string(at + 1));
  }
  bool number(double& out) {
    skip();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      out = std::strtod(begin, &end);
      pos_ += static_cast<std::size_t>(end - begin);
      return true;
    }
    return false;
  }
  bool keyword(const char* kw) {
    skip();
    const std::string k(kw);
    if (s_.compare(pos_, k.size(), k) == 0) {
      pos_ += k.size();
      return true;
    }
    return false;
  }

  void term(double sign, TrigPolynomial& f) {
    double coef = 1.0;
    const bool has_coef = number(coef);
    if (has_coef && peek() == '*') take();
    Phase phase;
    if (keyword("cos")) phase = Phase::Cos;
    else if (keyword("sin")) phase = Phase::Sin;
    else if (has_coef) {
      f.add_term(0, 0, Phase::Cos, sign * coef);
      return;
    } else {
      fail("expected a number, 'cos' or 'sin'");
    }
    int k1 = 0, k2 = 0;
    if (peek() == '(') {
      take();
      double lsign = 1.0;
      if (peek() == '+' || peek() == '-') lsign = take() == '-' ? -1.0 : 1.0;
      for (;;) {
        linear_atom(lsign, k1, k2);
        const char c = peek();
        if (c == ')') {
          take();
          break;
        }
        if (c != '+' && c != '-') fail("expected '+', '-' or ')'");
        lsign = take() == '-' ? -1.0 : 1.0;
      }
    } else {
      linear_atom(1.0, k1, k2);
    }
    f.add_term(k1, k2, phase, sign * coef);
  }

  void linear_atom(double sign, int& k1, int& k2) {
    double n = 1.0;
    const std::size_t at = pos_;
    if (number(n)) {
      if (n != std::floor(n)) fail("wave numbers must be integers", at);
      if (peek() == '*') take();
    }
    const char v = take();
    const int k = static_cast<int>(sign * n);
    if (v == 'x') k1 += k;
    else if (v == 'y') k2 += k;
    else fail("expected 'x' or 'y'", pos_ - 1);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

TrigPolynomial parse_trig_expression(const std::string& text) { return ExprParser(text).parse(); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bbeltrami::io
