#pragma once

#include <string>

#include <json.hpp>

#include "linkcharge/control.hpp"
#include "linkcharge/moduli.hpp"
#include "linkcharge/potential.hpp"
#include "linkcharge/stabilizer.hpp"

namespace linkcharge {

using nlohmann::json;

/// %.17g: round-trips every double.
std::string format_number(double v);

json to_json(const Linkage& l);
json to_json(const Configuration& p);
json to_json(const ChargeVector& q);
json to_json(const DiagonalCoords& x);
json to_json(const FixedCharges& f);
json to_json(const Minimum& m);
json to_json(const StabilizingSolution& s);
json to_json(const QuadStabilization& s);
json to_json(const Trajectory& t, const Linkage& l, const FixedCharges& fixed);
json to_json(const PolarCurve& c);

/// Accepts [a1, ...] or {"sides": [...]}.
Linkage linkage_from_json(const json& j);
/// Accepts [[x, y], ...] or {"vertices": [[x, y], ...]}.
Configuration configuration_from_json(const json& j);
ChargeVector charges_from_json(const json& j);

/// Inline JSON text, or else the path of a file holding it.
json parse_json_argument(const std::string& text_or_path);

std::string minimum_csv(const Minimum& m);
std::string stabilization_csv(const StabilizingSolution& s);
/// Header step,s,t,E,x1,y1,...,x5,y5.
std::string trajectory_csv(const Trajectory& t);
/// Header k,x2,E,on_boundary.
std::string polar_curve_csv(const PolarCurve& c);

}  // namespace linkcharge
