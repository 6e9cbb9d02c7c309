#pragma once

#include "formred/bounds.hpp"
#include "formred/covariant.hpp"
#include "formred/forms.hpp"
#include "formred/reduction.hpp"

#include <json.hpp>

#include <string_view>

namespace formred {

using json = nlohmann::json;

json to_json(const BinaryForm& form);
// {"coeffs":[...]} or {"roots":[[re,im],...],"leading":a0}
BinaryForm form_from_json(const json& j, const RootFinderOptions& opts = {});
BinaryForm parse_form(std::string_view text, const RootFinderOptions& opts = {});

json to_json(const UnimodularMatrix& g);
UnimodularMatrix matrix_from_json(const json& j);

json to_json(UpperHalfPoint z);
UpperHalfPoint point_from_json(const json& j);

json to_json(const ReductionTrace& trace);
ReductionTrace trace_from_json(const json& j);

json to_json(const BoundReport& report);
BoundReport report_from_json(const json& j);

json to_json(const Classification& c);
json to_json(const CovariantSolution& s);

} // namespace formred
