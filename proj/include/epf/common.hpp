#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace epf {

// Typed failure modes surfaced by the library. The code is kept on the
// exception so callers can branch without parsing messages.
enum class Errc {
  malformed_header,
  non_monotone_timestamps,
  unknown_series,
  gap_at_series_boundary,
  all_missing_day,
  degenerate_sample,
  insufficient_history,
  unknown_tau,
  dimension_mismatch,
  k_too_large,
  non_finite_input,
  degenerate_design,
  non_convergence,
  insufficient_errors,
  level_not_on_grid,
  misaligned_index,
  boundary_out_of_range,
  config_invalid,
  missing_stage,
  io_error,
};

class Error : public std::runtime_error {
public:
  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
  Errc code;
};

// ---------------------------------------------------------------------------
// Calendar helpers. Serial day numbers count days since 1970-01-01.
// ---------------------------------------------------------------------------

struct Date {
  int y = 1970;
  int m = 1;
  int d = 1;
  bool operator==(const Date&) const = default;
};

long days_from_civil(const Date& date);
Date civil_from_days(long serial);

// ISO weekday, 1 = Monday ... 7 = Sunday.
int weekday_mon1(long serial);
inline int weekday_mon1(const Date& date) { return weekday_mon1(days_from_civil(date)); }

Date add_days(const Date& date, long n);

// "YYYY-MM-DD"; throws Errc::io_error on malformed input.
Date parse_date(const std::string& s);
std::string format_date(const Date& date);

// ---------------------------------------------------------------------------
// Small utilities shared across modules.
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(const std::string& data);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

// Round-trip exact formatting for artifact files ("%.17g").
std::string fmt_full(double v);
std::string fmt_fixed(double v, int digits);

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, one per
// worker; every i writes only its own output slot, so the result is identical
// to the sequential order regardless of thread count. threads <= 1 or n < 2
// runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int resolve_threads(int requested);

}  // namespace epf
