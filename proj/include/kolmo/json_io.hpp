#pragma once

///
/// \file json_io.hpp
///
/// JSON documents read and written by the command-line tool. Field order is
/// fixed and numbers are written with 17 significant digits, so output is
/// byte-identical for identical input.
///
///   spline:   {"family":"am"|"mm","r":int,"knots":[..],"weights":[..],"constant":num}
///   problem:  {"family":"am"|"mm","r":int,"k":[ints],"M":[nums]}
///   moments:  {"k":[ints],"c":[nums]}
///   representation: {"index":"3/2","atoms":[{"node":num,"weight":num},..]}
///

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "kolmo/kolmogorov.hpp"

namespace kolmo
{

using Json = nlohmann::ordered_json;

/// Malformed document or schema violation.
class InputError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Pretty-printed with two-space indent; doubles as %.17g, integers verbatim.
std::string dump(const Json& doc);

Json parse_document(const std::string& text);

FamilyKind parse_family(const std::string& name);

Json to_json(const IdealSpline& spline);
IdealSpline spline_from_json(const Json& doc);

Json to_json(const NormVector& norms);
/// Problem document. `r` may be omitted for AM (defaults to k_d).
NormVector problem_from_json(const Json& doc);

Json to_json(const MomentVector& c);
/// Either a moments document or a problem document (converted with
/// moment_coordinates).
MomentVector moments_from_json(const Json& doc);

Json to_json(const Representation& rep);
Json to_json(const FeasibilityReport& report);
/// {"class":..,"witness":<representation|null>} plus "oracle" when requested.
Json to_json(const Classification& c, bool with_oracle);

Json to_json(const AdmissibilityResult& result);

} // namespace kolmo
