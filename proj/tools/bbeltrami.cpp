// Command-line driver: verify | simulate | census | spectral.
// Exit status: 0 pass, 1 check failure, 2 usage or spec error.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "bbeltrami/census.hpp"
#include "bbeltrami/dynamics.hpp"
#include "bbeltrami/errors.hpp"
#include "bbeltrami/io.hpp"
#include "bbeltrami/laplace_beltrami.hpp"
#include "bbeltrami/residuals.hpp"
#include "bbeltrami/spectral.hpp"

namespace fs = std::filesystem;
using namespace bbeltrami;
using io::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Config {
  std::string command;
  std::string field;
  double B = 1.0, C = 2.0;
  std::string metric;
  int grid_n = 64;
  double rtol = 1e-10;
  double t_max = 1e3;
  std::uint64_t seed = 1;
  std::string out = "out";
  int mu = 0;
  int samples = 0;
  std::string inject;
  std::vector<std::string> starts;
  bool on_z = false;
  double tol = 1e-12;

  json to_json() const {
    return {{"command", command}, {"field", field},  {"B", B},       {"C", C},
            {"metric", metric},   {"gridN", grid_n}, {"rtol", rtol}, {"tMax", t_max},
            {"seed", seed},       {"mu", mu},        {"samples", samples}, {"inject", inject},
            {"starts", starts},   {"onZ", on_z},     {"tol", tol}};
  }
  std::string hash() const { return io::fnv1a_hex(to_json().dump()); }
};

AnyField resolve_field(const Config& cfg) {
  if (cfg.field == "abc") return GlobalTorusField::babc(cfg.B, cfg.C);
  if (!cfg.field.empty()) return io::field_from_json(io::load_json_arg(cfg.field));
  if (cfg.mu > 0) {
    const auto basis = enumerate_eigenspace(cfg.mu);
    return SymmetricBField::from_hamiltonian(std::sqrt(double(cfg.mu)),
                                             sample_eigenfunction(basis, cfg.seed));
  }
  throw SpecError("no field given: use --field (abc | file | inline JSON) or --mu");
}

SurfaceMetric resolve_metric(const Config& cfg) {
  if (cfg.metric.empty()) return SurfaceMetric::flat();
  return io::metric_from_json(io::load_json_arg(cfg.metric));
}

SymmetricBField chart_of(const AnyField& f) {
  if (const auto* s = std::get_if<SymmetricBField>(&f)) return *s;
  return std::get<GlobalTorusField>(f).chart_field();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write '" + path.string() + "'");
  out << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Vec3 parse_start(const std::string& s) {
  std::stringstream ss(s);
  Vec3 p{};
  char comma = 0;
  if (!(ss >> p[0] >> comma >> p[1] >> comma >> p[2]) || comma != ',')
    throw SpecError("--start expects x,y,z (got '" + s + "')");
  return p;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Config& cfg) {
  const AnyField field = resolve_field(cfg);
  const SurfaceMetric metric = resolve_metric(cfg);
  const SymmetricBField chart = chart_of(field);
  const double scale = std::max(1.0, chart.Xz().l1_norm() * std::max(1, chart.Xz().max_abs_wavenumber()));
  const double tol = cfg.tol * scale;

  json j;
  j["configHash"] = cfg.hash();
  j["field"] = io::to_json(field);
  j["metric"] = io::to_json(metric);
  j["gridN"] = cfg.grid_n;
  j["tolerance"] = tol;
  bool pass = true;

  // The field is built for the flat metric; structural residuals use it.
  const BeltramiResidual br = beltrami_residual(chart, SurfaceMetric::flat(), cfg.grid_n);
  j["beltrami"] = {{"normal", br.normal}, {"x", br.x}, {"y", br.y}, {"pass", br.max() <= tol}};
  pass &= br.max() <= tol;
  const double div = divergence_residual(chart, cfg.grid_n);
  j["divergence"] = {{"residual", div}, {"pass", div <= tol}};
  pass &= div <= tol;
  try {
    const ContactReport c = contact_check(chart, SurfaceMetric::flat(), cfg.grid_n);
    j["contact"] = {{"minDensity", c.min_density}, {"minNormSq", c.min_norm_sq}, {"pass", c.min_density > 0.0}};
    pass &= c.min_density > 0.0;
  } catch (const CheckError& e) {
    j["contact"] = {{"error", e.what()}, {"pass", false}};
    pass = false;
  }
  const double analytic = analytic_eigen_residual(chart.Xz(), chart.lambda(), cfg.grid_n);
  j["eigenAnalytic"] = {{"residual", analytic}, {"pass", analytic <= tol}};
  pass &= analytic <= tol;

  // Discrete Delta_h residual at gridN and 2 gridN.
  SurfaceFunction xz = [f = chart.Xz()](double x, double y) { return f(x, y); };
  std::string note = "flat metric: Xz itself";
  if (metric.shear_amplitude() != 0.0) {
    xz = shear_pullback(chart.Xz(), metric.shear_amplitude());
    note = "shear metric: exact eigenfunction Xz o phi";
  } else if (!metric.is_flat()) {
    note = "general metric: residual of Xz itself (no exact eigenfunction known)";
  }
  const double r1 = eigen_residual_check(xz, metric, chart.lambda(), cfg.grid_n);
  const double r2 = eigen_residual_check(xz, metric, chart.lambda(), 2 * cfg.grid_n);
  json eig = {{"gridN", cfg.grid_n}, {"residual", r1}, {"gridN2", 2 * cfg.grid_n},
              {"residual2", r2},     {"ratio", r2 > 0.0 ? r1 / r2 : 0.0}, {"function", note}};
  if (metric.shear_amplitude() != 0.0) {
    const double ratio = r1 / r2;
    eig["pass"] = std::abs(ratio - 4.0) <= 0.5;
    pass &= std::abs(ratio - 4.0) <= 0.5;
  }
  j["eigenDiscrete"] = eig;
  if (const auto* g = std::get_if<GlobalTorusField>(&field))
    j["singularClaimsValid"] = g->singular_claims_valid();
  j["pass"] = pass;
  write_file(fs::path(cfg.out) / "verify.json", dump(j));
  std::cout << "verify: " << (pass ? "pass" : "FAIL") << " (beltrami " << br.max() << ", divergence " << div
            << ", eigen " << analytic << ", discrete ratio " << (r2 > 0 ? r1 / r2 : 0.0) << ")\n";
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- simulate

std::vector<Vec3> default_starts(const AnyField& field) {
  const auto eqs = restricted_equilibria(field);
  std::vector<Vec3> out;
  if (std::holds_alternative<GlobalTorusField>(field)) {
    if (!eqs.empty()) out.push_back({eqs.front().first, eqs.front().second, 0.5 * kPi});
    out.push_back({1.0, 0.3, 1.0});
  } else {
    if (!eqs.empty()) out.push_back({eqs.front().first, eqs.front().second, 1e-3});
    out.push_back({1.0, 0.3, 0.1});
  }
  return out;
}

int cmd_simulate(const Config& cfg) {
  const AnyField field = resolve_field(cfg);
  std::vector<Vec3> starts;
  for (const auto& s : cfg.starts) starts.push_back(parse_start(s));
  if (starts.empty()) starts = default_starts(field);

  ClassifyOptions co;
  co.rtol = cfg.rtol;
  co.t_max = cfg.t_max;
  const EquilibriumList eqs = restricted_equilibria(field);

  json report;
  report["configHash"] = cfg.hash();
  report["field"] = io::to_json(field);
  json runs = json::array();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::string csv = "trajectory_" + std::to_string(i) + ".csv";
    json run = {{"start", io::to_json(starts[i])}, {"csv", csv}};
    Trajectory combined;
    if (cfg.on_z) {
      IntegrateOptions o;
      o.rtol = cfg.rtol;
      o.on_z = true;
      combined = integrate(field, starts[i], 0.0, std::min(cfg.t_max, 100.0), o);
      run["onZ"] = true;
      run["hDrift"] = combined.max_h_drift();
      const LimitSet ls = limit_set_estimate(combined, LimitDirection::Omega);
      run["omegaSet"] = {{"kind", to_string(ls.kind)}, {"location", io::to_json(ls.location)},
                         {"diameter", ls.diameter}, {"period", ls.period}};
    } else {
      const OrbitPair pair = integrate_both_ways(field, starts[i], co);
      const OrbitVerdict v = classify_trajectories(field, pair, eqs, co);
      run["verdict"] = io::to_json(v);
      run["hDrift"] = std::max(pair.forward.max_h_drift(), pair.backward.max_h_drift());
      for (auto [name, traj, dir] : {std::tuple{"alphaSet", &pair.backward, LimitDirection::Alpha},
                                     std::tuple{"omegaSet", &pair.forward, LimitDirection::Omega}}) {
        const LimitSet ls = limit_set_estimate(field, *traj, dir);
        run[name] = {{"kind", to_string(ls.kind)}, {"location", io::to_json(ls.location)},
                     {"diameter", ls.diameter}, {"distanceToZ", ls.distance_to_z},
                     {"period", ls.period}, {"thickness", ls.thickness}};
      }
      combined.samples.assign(pair.backward.samples.rbegin(), pair.backward.samples.rend());
      combined.samples.insert(combined.samples.end(), pair.forward.samples.begin() + 1,
                              pair.forward.samples.end());
      std::cout << "start " << i << ": " << to_string(v.kind) << (v.inconclusive ? " (inconclusive)" : "")
                << "\n";
    }
    std::ostringstream os;
    io::write_trajectory_csv(os, combined);
    write_file(fs::path(cfg.out) / csv, os.str());
    runs.push_back(run);
  }
  report["runs"] = runs;
  write_file(fs::path(cfg.out) / "verdicts.json", dump(report));
  return 0;
}

// ---------------------------------------------------------------- census

CensusOptions census_options(const Config& cfg) {
  CensusOptions o;
  o.classify.rtol = cfg.rtol;
  o.classify.t_max = cfg.t_max;
  return o;
}

int cmd_census(const Config& cfg) {
  const CensusOptions opts = census_options(cfg);
  if (!cfg.field.empty()) {
    const AnyField field = resolve_field(cfg);
    const SurfaceMetric metric = resolve_metric(cfg);
    const MorseAudit audit = morse_audit(planar_part(field).Xz, cfg.grid_n);
    const auto records = classify_equilibria(field, metric, audit);
    const CensusReport rep = escape_census(field, records, opts);
    json j = io::to_json(rep);
    j["configHash"] = cfg.hash();
    j["field"] = io::to_json(field);
    j["audit"] = io::to_json(audit);
    bool pass = rep.bound_met;
    if (const auto* g = std::get_if<GlobalTorusField>(&field);
        g && g->kind() == GlobalTorusField::Kind::GloballySymmetric) {
      try {
        const GlobalSpoResult spo = globally_symmetric_spo(*g, opts.classify);
        j["globallySymmetricSPO"] = {{"minH", spo.min_value}, {"maxH", spo.max_value},
                                     {"overMin", io::to_json(spo.over_min)},
                                     {"overMax", io::to_json(spo.over_max)}, {"pass", true}};
      } catch (const CheckError& e) {
        j["globallySymmetricSPO"] = {{"error", e.what()}, {"pass", false}};
        pass = false;
      }
    }
    write_file(fs::path(cfg.out) / "census.json", dump(j));
    std::ostringstream csv;
    io::write_escape_csv(csv, rep);
    write_file(fs::path(cfg.out) / "escape_orbits.csv", csv.str());
    std::printf("equilibria %zu | seeds %zu | escape orbits %zu | singular periodic orbits %zu | "
                "inconclusive %d | bound %d: %s\n",
                rep.equilibria.size(), rep.results.size(), rep.escape_orbits.size(),
                rep.singular_periodic_pairs.size(), rep.inconclusive, rep.escape_bound,
                rep.bound_met ? "met" : "NOT MET");
    return pass ? 0 : 1;
  }

  if (cfg.mu <= 0) throw SpecError("census needs --field or --mu");
  const auto basis = enumerate_eigenspace(cfg.mu);
  const int samples = std::max(1, cfg.samples);
  std::ostringstream lines, csv_all;
  std::printf("%6s %20s %5s %7s %5s %6s %5s\n", "sample", "seed", "eq", "escape", "spo", "inconc", "bound");
  int failures = 0, skipped = 0, inconclusive = 0, seeds_total = 0;
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const TrigPolynomial xz = sample_eigenfunction(basis, seed);
    const AnyField field = SymmetricBField::from_hamiltonian(std::sqrt(double(cfg.mu)), xz);
    json line = {{"sample", i}, {"seed", seed}, {"Xz", io::to_json(xz)}};
    MorseAudit audit;
    try {
      audit = morse_audit(xz, std::max(cfg.grid_n, 16 * xz.max_abs_wavenumber()));
    } catch (const CheckError& e) {
      line["skipped"] = e.what();
    }
    if (!line.contains("skipped") && !(audit.is_morse && audit.zero_set_regular))
      line["skipped"] = "non-Morse sample or critical value 0";
    if (line.contains("skipped")) {
      ++skipped;
      std::printf("%6d %20llu  skipped: %s\n", i, static_cast<unsigned long long>(seed),
                  line["skipped"].get<std::string>().c_str());
      lines << line.dump() << "\n";
      continue;
    }
    const CensusReport rep = escape_census(field, classify_equilibria(field, resolve_metric(cfg), audit), opts);
    line["census"] = io::to_json(rep);
    lines << line.dump() << "\n";
    failures += !rep.bound_met;
    inconclusive += rep.inconclusive;
    seeds_total += static_cast<int>(rep.results.size());
    std::printf("%6d %20llu %5zu %7zu %5zu %6d %5s\n", i, static_cast<unsigned long long>(seed),
                rep.equilibria.size(), rep.escape_orbits.size(), rep.singular_periodic_pairs.size(),
                rep.inconclusive, rep.bound_met ? "met" : "FAIL");
  }
  json summary = {{"summary", true},     {"configHash", cfg.hash()}, {"samples", samples},
                  {"skipped", skipped},  {"boundFailures", failures}, {"inconclusive", inconclusive},
                  {"seedTrajectories", seeds_total},
                  {"countingConvention", CensusReport::counting_convention}};
  lines << summary.dump() << "\n";
  write_file(fs::path(cfg.out) / "census.jsonl", lines.str());
  std::printf("bound failures %d / %d, skipped %d, inconclusive %d / %d seeds\n", failures,
              samples - skipped, skipped, inconclusive, seeds_total);
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- spectral

int cmd_spectral(const Config& cfg) {
  if (cfg.mu <= 0) throw SpecError("spectral needs --mu");
  const auto basis = enumerate_eigenspace(cfg.mu);
  std::ostringstream lines;
  json modes = json::array();
  for (const auto& [k1, k2] : basis.modes) modes.push_back({k1, k2});
  lines << json{{"configHash", cfg.hash()}, {"mu", cfg.mu}, {"dim", basis.dim()}, {"modes", modes}}.dump() << "\n";
  std::cout << "mu " << cfg.mu << ": dim " << basis.dim() << "\n";

  const int grid = [&](const TrigPolynomial& f) { return std::max(cfg.grid_n, 16 * f.max_abs_wavenumber()); }(basis.basis.front());
  if (!cfg.inject.empty()) {
    const TrigPolynomial f = io::parse_trig_expression(cfg.inject);
    json line = {{"inject", cfg.inject}, {"Xz", io::to_json(f)}, {"onShell", f.on_shell(cfg.mu)}};
    try {
      const MorseAudit a = morse_audit(f, grid);
      line["audit"] = io::to_json(a);
      line["flag"] = a.is_morse ? "morse" : "non-Morse";
    } catch (const CheckError& e) {
      line["flag"] = "non-Morse";
      line["error"] = e.what();
    }
    std::cout << "inject '" << cfg.inject << "': " << line["flag"].get<std::string>() << "\n";
    lines << line.dump() << "\n";
  }
  int morse = 0, regular = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const TrigPolynomial f = sample_eigenfunction(basis, seed);
    json line = {{"sample", i}, {"seed", seed}};
    try {
      const MorseAudit a = morse_audit(f, grid);
      morse += a.is_morse;
      regular += a.is_morse && a.zero_set_regular;
      line["audit"] = io::to_json(a);
    } catch (const CheckError& e) {
      line["error"] = e.what();
    }
    lines << line.dump() << "\n";
  }
  if (cfg.samples > 0) {
    const double frac = double(morse) / cfg.samples;
    lines << json{{"summary", true}, {"samples", cfg.samples}, {"morseFraction", frac},
                  {"morseRegularFraction", double(regular) / cfg.samples}}.dump() << "\n";
    std::cout << "Morse fraction " << frac << " over " << cfg.samples << " samples\n";
  }
  write_file(fs::path(cfg.out) / "spectral.jsonl", lines.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"b-Beltrami field laboratory"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--field", cfg.field, "abc | field JSON file | inline JSON");
    sub->add_option("--B", cfg.B, "b-ABC parameter B");
    sub->add_option("--C", cfg.C, "b-ABC parameter C");
    sub->add_option("--metric", cfg.metric, "metric JSON file or inline JSON");
    sub->add_option("--gridN", cfg.grid_n, "grid size")->check(CLI::Range(16, 4096));
    sub->add_option("--rtol", cfg.rtol, "integrator relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tmax", cfg.t_max, "integration horizon")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--mu", cfg.mu, "Laplacian eigenvalue |k|^2");
  };
  auto* verify = app.add_subcommand("verify", "structural residuals of a field");
  common(verify);
  verify->add_option("--tol", cfg.tol, "residual tolerance (scaled by the field size)");
  auto* simulate = app.add_subcommand("simulate", "integrate and classify orbits");
  common(simulate);
  simulate->add_option("--start", cfg.starts, "start point x,y,z (repeatable)");
  simulate->add_flag("--on-z", cfg.on_z, "integrate the restricted field on Z");
  auto* census = app.add_subcommand("census", "equilibria, escape orbits and singular periodic orbits");
  common(census);
  census->add_option("--samples", cfg.samples, "number of sampled fields");
  auto* spectral = app.add_subcommand("spectral", "eigenspace basis and Morse census");
  common(spectral);
  spectral->add_option("--samples", cfg.samples, "number of sampled eigenfunctions");
  spectral->add_option("--inject", cfg.inject, "audit a given function, e.g. \"cos x\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.on_z && cfg.command == "simulate" && cfg.starts.empty()) cfg.starts.push_back("0,0,0");

  try {
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "simulate") return cmd_simulate(cfg);
    if (cfg.command == "census") return cmd_census(cfg);
    return cmd_spectral(cfg);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CheckError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
