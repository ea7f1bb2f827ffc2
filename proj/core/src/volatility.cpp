#include "orderflow/volatility.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <vector>

#include "orderflow/csv.hpp"
#include "orderflow/errors.hpp"

namespace orderflow {

const char* vol_label_name(VolLabel label) {
  switch (label) {
    case VolLabel::kHigh: return "High";
    case VolLabel::kLow: return "Low";
    case VolLabel::kNeither: return "Neither";
  }
  return "Neither";
}

std::optional<VolLabel> vol_label_from_name(std::string_view name) {
  if (name == "High") return VolLabel::kHigh;
  if (name == "Low") return VolLabel::kLow;
  if (name == "Neither") return VolLabel::kNeither;
  return std::nullopt;
}

double normalized_range(const DailyPriceStats& stats, RangeNormalization mode) {
  double span = stats.high - stats.low;
  switch (mode) {
    case RangeNormalization::kLow:
      if (stats.low <= 0.0) throw Error(Errc::non_positive_low, "daily low must be positive");
      return span / stats.low;
    case RangeNormalization::kOpen:
      if (stats.first_price <= 0.0) {
        throw Error(Errc::non_positive_low, "open proxy must be positive");
      }
      return span / stats.first_price;
    case RangeNormalization::kNone:
      return span;
  }
  return span;
}

std::map<Date, VolatilityLabel> classify_days(const std::string& ticker,
                                              const std::map<Date, double>& ranges,
                                              const DateInterval& window, SigmaMode sigma_mode) {
  std::vector<std::pair<Date, double>> in_window;
  for (const auto& [date, range] : ranges) {
    if (window.contains(date)) in_window.emplace_back(date, range);
  }
  if (in_window.size() < 2) {
    throw Error(Errc::insufficient_data,
                "window holds " + std::to_string(in_window.size()) + " day(s), need at least 2");
  }

  double mu = 0.0;
  for (const auto& [date, range] : in_window) mu += range;
  mu /= static_cast<double>(in_window.size());

  double ss = 0.0;
  for (const auto& [date, range] : in_window) {
    double d = range - mu;
    ss += d * d;
  }
  double denom = sigma_mode == SigmaMode::kPopulation
                     ? static_cast<double>(in_window.size())
                     : static_cast<double>(in_window.size() - 1);
  double sigma = std::sqrt(ss / denom);

  std::map<Date, VolatilityLabel> out;
  for (const auto& [date, range] : in_window) {
    VolLabel label = VolLabel::kNeither;
    if (range > mu + sigma) {
      label = VolLabel::kHigh;
    } else if (range < mu - sigma) {
      label = VolLabel::kLow;
    }
    out.emplace(date, VolatilityLabel{ticker, date, range, mu, sigma, label});
  }
  return out;
}

ExtremeDays select_extreme_days(const std::map<Date, VolatilityLabel>& labels) {
  ExtremeDays picked;
  double best_high = 0.0;
  double best_low = 0.0;
  for (const auto& [date, lab] : labels) {
    // std::map iterates dates ascending, so strict comparisons keep the
    // earliest date on ties.
    if (lab.label == VolLabel::kHigh && (!picked.high || lab.normalized_range > best_high)) {
      picked.high = date;
      best_high = lab.normalized_range;
    }
    if (lab.label == VolLabel::kLow && (!picked.low || lab.normalized_range < best_low)) {
      picked.low = date;
      best_low = lab.normalized_range;
    }
  }
  return picked;
}

std::map<Date, VolatilityLabel> keep_extreme_days(const std::map<Date, VolatilityLabel>& labels) {
  ExtremeDays picked = select_extreme_days(labels);
  std::map<Date, VolatilityLabel> out = labels;
  for (auto& [date, lab] : out) {
    if (lab.label == VolLabel::kHigh && (!picked.high || *picked.high != date)) {
      lab.label = VolLabel::kNeither;
    }
    if (lab.label == VolLabel::kLow && (!picked.low || *picked.low != date)) {
      lab.label = VolLabel::kNeither;
    }
  }
  return out;
}

void write_labels_csv(std::ostream& out, const std::map<SeriesKey, VolatilityLabel>& labels) {
  out << "ticker,date,normalized_range,mu,sigma,label\n";
  for (const auto& [key, lab] : labels) {
    out << key.ticker << ',' << key.date.to_string() << ',' << format_double(lab.normalized_range)
        << ',' << format_double(lab.mu) << ',' << format_double(lab.sigma) << ','
        << vol_label_name(lab.label) << '\n';
  }
}

std::map<SeriesKey, VolatilityLabel> read_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::missing_column, "empty labels file");

  std::map<SeriesKey, VolatilityLabel> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 6) {
      throw Error(Errc::bad_row, "labels line " + std::to_string(line_no) + ": expected 6 fields");
    }
    auto date = Date::parse(cells[1]);
    auto label = vol_label_from_name(cells[5]);
    if (!date || !label) {
      throw Error(Errc::bad_row, "labels line " + std::to_string(line_no) + ": bad date or label");
    }
    VolatilityLabel lab;
    lab.ticker = cells[0];
    lab.date = *date;
    try {
      lab.normalized_range = std::stod(cells[2]);
      lab.mu = std::stod(cells[3]);
      lab.sigma = std::stod(cells[4]);
    } catch (const std::exception&) {
      throw Error(Errc::bad_row, "labels line " + std::to_string(line_no) + ": bad number");
    }
    lab.label = *label;
    out.emplace(SeriesKey{lab.ticker, lab.date}, lab);
  }
  return out;
}

}  // namespace orderflow
