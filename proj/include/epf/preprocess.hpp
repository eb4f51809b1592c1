#pragma once

#include "epf/series.hpp"

namespace epf {

// Produces a gap-free panel:
//  - duplicated hours collapse to the arithmetic mean of all readings;
//  - missing hourly values take the mean of the nearest non-missing
//    neighbours on both sides (one shared value per missing run);
//  - daily commodity series (gas, EUA) collapse to one value per day and
//    missing days carry the most recent previous close forward;
//  - missing intraday partial values fall back to the same-slot day-ahead
//    price when one is available.
// Throws gap_at_series_boundary when a run has no neighbour on one side and
// all_missing_day when some day is empty across every hourly series.
HourlyPanel normalize_calendar(const HourlyPanel& raw);

}  // namespace epf
