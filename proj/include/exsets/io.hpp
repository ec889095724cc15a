#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "exsets/exceptional.hpp"
#include "exsets/fractal.hpp"
#include "exsets/symbolic.hpp"
#include "exsets/thermo.hpp"

namespace exsets::io {

using Json = nlohmann::ordered_json;

/// Finite reals as numbers; NaN as null; infinities as "-inf" / "inf".
Json real(double v);

Json to_json(const ForbiddenFamily& family);
ForbiddenFamily family_from_json(const Json& j);

/// {depth, alphabet_size, values: {block: value}}.
Json to_json(const LocallyConstantPotential& phi);
LocallyConstantPotential potential_from_json(const Json& j);

Json to_json(const DimEstimate& est);
Json to_json(const HyperbolicSpectrum& spectrum);
Json to_json(const BoundCheck& bound);
Json to_json(const DimensionReport& report);

/// Header `depth,entropy,d_u,bound_name,bound,margin`, one row per bound.
std::string reports_to_csv(const std::vector<DimensionReport>& reports);

/// "# key=value" metadata lines, then "x,y" (or "x") rows.
void write_point_cloud(std::ostream& os, const PointCloud& cloud);
PointCloud read_point_cloud(std::istream& is);

/// Stable text formatting of a double (shortest round trip).
std::string format_real(double v);

}  // namespace exsets::io
