#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <string>

#include "bbeltrami/census.hpp"
#include "bbeltrami/dynamics.hpp"
#include "bbeltrami/field.hpp"
#include "bbeltrami/metric.hpp"
#include "bbeltrami/spectral.hpp"

namespace bbeltrami::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Parses JSON text; syntax errors become SpecError with line and column.
json parse_json(const std::string& text, const std::string& source);
/// Inline JSON when arg starts with '{', otherwise a file path.
json load_json_arg(const std::string& arg);

/// [{"k": [k1, k2], "phase": "cos"|"sin", "amp": a}, ...]
json to_json(const TrigPolynomial& f);
TrigPolynomial trig_from_json(const json& j, const std::string& where);

/// Chart model: {"lambda": l, "Xz": [...], "eps": e}
/// Global model: {"model": "bABC", "B": b, "C": c}
///            or {"model": "globallySymmetric", "lambda": l, "H": [...]}
json to_json(const AnyField& field);
AnyField field_from_json(const json& j);

/// {"flat": true} | {"shear": s} | {"h11": [...], "h12": [...], "h22": [...]}
json to_json(const SurfaceMetric& metric);
SurfaceMetric metric_from_json(const json& j);

json to_json(const MorseAudit& audit);
json to_json(const OrbitVerdict& verdict);
json to_json(const EquilibriumRecord& record);
json to_json(const CensusReport& report);
json to_json(const Vec3& v);

/// t,x,y,z,H rows with round-trip precision.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// One row per escape orbit of the census.
void write_escape_csv(std::ostream& out, const CensusReport& report);

/// Formula parser for trig polynomials, e.g. "cos x", "-2 sin y + cos(2x+y)",
/// "0.5*sin(x - 3y)".  Throws SpecError pointing at the offending column.
TrigPolynomial parse_trig_expression(const std::string& text);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace bbeltrami::io
