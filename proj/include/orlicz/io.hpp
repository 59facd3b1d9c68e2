#pragma once

#include <string>
#include <variant>

#include "json.hpp"
#include "orlicz/bodies.hpp"
#include "orlicz/functionals.hpp"
#include "orlicz/harness.hpp"
#include "orlicz/orlicz_function.hpp"

namespace orlicz::io {

using json = nlohmann::json;

/// Non-finite values are written as the strings "inf", "-inf", "nan".
json number(double v);
double to_double(const json& j);

json to_json(const SphereGrid& grid);
SphereGrid grid_from_json(const json& j);

json to_json(const ConvexBody& body);
json to_json(const StarBody& body);

using AnyBody = std::variant<ConvexBody, StarBody>;
/// `dim` is used for balls given without one.
AnyBody body_from_json(const json& j, int dim = 2);
ConvexBody convex_from_json(const json& j, int dim = 2);

/// Built-in kinds only; custom functions have no JSON form (ParseError).
json to_json(const OrliczFunction& phi);
OrliczFunction phi_from_json(const json& j, int dim);

/// "power:2", "power(2)", "constant:1.5", "arctan_inv_n", inline JSON, or a
/// path to a JSON file.
OrliczFunction parse_phi(const std::string& spec, int dim);

json to_json(const FunctionalResult& r);
json to_json(const SuiteReport& r);

/// One row per case, every field quoted, numbers as %.17g.
std::string report_csv(const SuiteReport& r);
std::string csv_field(const std::string& s);
std::string format_double(double v);

json read_json_file(const std::string& path);
json parse_json(const std::string& text);
/// Writes to a temporary file beside `path`, then renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace orlicz::io
