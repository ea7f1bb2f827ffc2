#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "orderflow/events.hpp"
#include "orderflow/time.hpp"

namespace orderflow {

enum class VolLabel { kHigh, kLow, kNeither };

const char* vol_label_name(VolLabel label);
std::optional<VolLabel> vol_label_from_name(std::string_view name);

// How the daily range is made comparable across price levels.
enum class RangeNormalization {
  kLow,   // (high - low) / low
  kOpen,  // (high - low) / first priced row of the day
  kNone,  // high - low
};

enum class SigmaMode { kPopulation, kSample };

struct VolatilityLabel {
  std::string ticker;
  Date date;
  double normalized_range = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  VolLabel label = VolLabel::kNeither;
};

// Throws Error{non_positive_low} when the chosen denominator is not positive.
double normalized_range(const DailyPriceStats& stats,
                        RangeNormalization mode = RangeNormalization::kLow);

// Labels each day against the mu +/- sigma thresholds computed over all days
// of `ranges` inside `window`. Strict inequalities: a range equal to a
// threshold is Neither. Throws Error{insufficient_data} with fewer than two
// days in the window.
std::map<Date, VolatilityLabel> classify_days(const std::string& ticker,
                                              const std::map<Date, double>& ranges,
                                              const DateInterval& window,
                                              SigmaMode sigma_mode = SigmaMode::kPopulation);

struct ExtremeDays {
  std::optional<Date> high;  // argmax of normalized range among High days
  std::optional<Date> low;   // argmin among Low days
};

// Picks at most one High and one Low day per stock; ties break to the
// earliest date.
ExtremeDays select_extreme_days(const std::map<Date, VolatilityLabel>& labels);

// Demotes every High/Low day other than the selected extremes to Neither, so
// each stock carries at most one of each.
std::map<Date, VolatilityLabel> keep_extreme_days(const std::map<Date, VolatilityLabel>& labels);

// CSV with columns ticker,date,normalized_range,mu,sigma,label.
void write_labels_csv(std::ostream& out,
                      const std::map<SeriesKey, VolatilityLabel>& labels);
std::map<SeriesKey, VolatilityLabel> read_labels_csv(std::istream& in);

}  // namespace orderflow
