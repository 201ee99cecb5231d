#pragma once

// JSON encoding of the library types. Readers ignore unknown keys so that any
// emitted document can be fed back to the command consuming that type.

#include <string>

#include <json.hpp>

#include "su11/algebra.hpp"
#include "su11/canonical.hpp"
#include "su11/controllability.hpp"
#include "su11/representation.hpp"
#include "su11/simulator.hpp"
#include "su11/steering.hpp"

namespace su11::io {

using json = nlohmann::ordered_json;

/// Inline JSON text, or @path to read it from a file.
json parse_argument(const std::string& text, const char* what);

json to_json(const AlgebraElement& m);
json to_json(const GroupElement& x);
json to_json(const ClassKind& c);
json to_json(const TracePolynomial& q);
json to_json(const OmegaSet& omega);
json to_json(const ControlInterval& piece);
json to_json(const SubalgebraBasis& algebra);
json to_json(const Certificate& cert);
json to_json(const Verdict& verdict);
json to_json(const NormalizationResult& n);
json to_json(const CanonicalSystem& c);
json to_json(const PeriodicControl& p);
json to_json(const ControlSchedule& s);
json to_json(const CertificateReport& r);
json to_json(const SteeringPlan& p);
json to_json(const InteriorResiduals& r);
json to_json(cplx z);

/// Infinite endpoints are written as null.
json number_or_null(double v);

AlgebraElement algebra_from_json(const json& j);
/// Validated with require_group_element.
GroupElement group_from_json(const json& j);
/// Accepts a schedule, or any object carrying one under "schedule" (a steering plan).
ControlSchedule schedule_from_json(const json& j);

bool looks_like_group(const json& j);

}  // namespace su11::io
