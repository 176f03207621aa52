#pragma once

#include "ars/ar.hpp"
#include "ars/ars_model.hpp"

#include <json.hpp>

#include <string>

namespace ars {

using Json = nlohmann::json;

Json to_json(const ArModel& model);
Json to_json(const ArsModel& model);
Json to_json(const ExtArsModel& model);

ArModel ar_from_json(const Json& doc);

/// The stored slack is paired with the trailing rows of `history`; only the
/// final completed state matters for forecasting.
ArsModel ars_from_json(const Json& doc, const ObservedSeries& history);
ExtArsModel ars_int_from_json(const Json& doc, const ObservedSeries& history);

/// Dispatches on "type". Throws InvalidArgument on a dimension mismatch.
ObservedSeries forecast_from_json(const Json& doc, const ObservedSeries& history, Index k);

}  // namespace ars
