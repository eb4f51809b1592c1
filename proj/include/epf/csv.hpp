#pragma once

#include <string>
#include <vector>

#include "epf/series.hpp"

namespace epf {

// Reads one market file. Expected header: `timestamp,<series-id>,...` with
// timestamps `YYYY-MM-DD HH:00` on an hourly grid, strictly increasing except
// for the single repeated hour of the autumn clock change. Empty cells are
// missing values, `#` lines are comments. Returns the raw panel; no gap
// filling happens here.
HourlyPanel load_market_csv(const std::string& path);

// Plain text helpers shared by the artifact writers.
std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);

}  // namespace epf
