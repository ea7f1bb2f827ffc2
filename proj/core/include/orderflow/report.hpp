#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orderflow/markov.hpp"
#include "orderflow/volatility.hpp"

namespace orderflow {

enum class Regime { kHigh, kLow };

const char* regime_name(Regime r);

struct SectorSpec {
  std::string name;
  std::vector<std::string> tickers;
};

// The built-in six-sector, eighteen-ticker universe; configs may override it.
std::vector<SectorSpec> default_sectors();

// Filesystem-safe lowercase name, e.g. "Finance & Banking" -> "finance_banking".
std::string sector_slug(const std::string& name);

enum class AggregationMode { kPooled, kMeanOfMatrices };

// One sector-regime chain: the stock-days that fed it, the aggregate counts,
// the fitted matrix and (when the chain is ergodic) its diagnostics.
struct SectorChainSet {
  SectorSpec sector;
  Regime regime = Regime::kHigh;
  std::vector<SeriesKey> members;
  TransitionCounts pooled_counts;
  TransitionMatrix matrix;
  std::optional<ChainAnalytics> analytics;
  std::string analytics_error;  // set when analytics is absent
};

// Aggregates per-(ticker, day) counts into one chain per sector and regime.
// kPooled sums counts then fits once; kMeanOfMatrices fits per stock-day,
// averages the probability matrices elementwise and renormalises rows.
// Sector-regime pairs with no labeled days yield no set; a sector with no
// labeled days in either regime throws Error{empty_sector}.
std::vector<SectorChainSet> build_sector_chains(
    const std::map<SeriesKey, TransitionCounts>& chains,
    const std::map<SeriesKey, VolatilityLabel>& labels, std::span<const SectorSpec> sectors,
    AggregationMode mode);

// Self-transition probability of each state, the per-order inertia.
std::vector<double> diagonal_inertia(const TransitionMatrix& matrix);

// Cross-regime probability probes at fixed transitions (fill -> opposite add,
// add -> same-side delete). A probability is absent when either state was
// removed from that regime's chain.
struct TransitionProbe {
  OrderState from = OrderState::kAddBid;
  OrderState to = OrderState::kAddBid;
  std::optional<double> prob_high;
  std::optional<double> prob_low;
};

std::vector<TransitionProbe> named_probes(const TransitionMatrix* high,
                                          const TransitionMatrix* low);

// Heatmap of a transition matrix: r x r colored cells with 2-decimal labels,
// columns = current state, rows = next state, single-hue ramp over
// [0, max entry].
std::string heatmap_svg(const TransitionMatrix& matrix, const std::string& title);

// Full-precision matrix CSV (header: state,<codes...>; one row per source
// state). Reading back reproduces the matrix exactly.
void write_matrix_csv(std::ostream& out, const TransitionMatrix& matrix);
TransitionMatrix read_matrix_csv(std::istream& in);

// Fixed-precision tables keyed (sector, regime), one state per column:
// stationary probabilities to 3 decimals (values under 0.001 render as
// "<0.001"), mean recurrence times to 1 decimal, spectral gap / relaxation
// time / entropy rate to 3 decimals.
std::string stationary_table_csv(std::span<const SectorChainSet> sets);
std::string mrt_table_csv(std::span<const SectorChainSet> sets);
std::string spectral_table_csv(std::span<const SectorChainSet> sets);
std::string probes_table_csv(std::span<const SectorChainSet> sets);

struct ChiSquareRecord {
  std::string ticker;            // "*" for sector-level records
  std::string scope;             // "day" or "pooled"
  std::optional<Date> date;      // set for scope == "day"
  std::optional<Regime> regime;  // set for scope == "pooled"
  ChiSquareResult result;
};

std::string chi_square_table_csv(std::span<const ChiSquareRecord> records);

// Everything cmd_analyze knows, bundled for the full-precision JSON summary.
struct AnalysisSummary {
  std::vector<std::string> inputs;
  std::string window_from;
  std::string window_to;
  double alpha = 0.01;
  std::string aggregation;
  std::string normalization;
  std::string sigma_mode;
  std::string session;
  std::map<SeriesKey, VolatilityLabel> labels;
  std::vector<ChiSquareRecord> chi_square;
  std::vector<SectorChainSet> sets;
  std::vector<std::string> notes;
};

std::string summary_json(const AnalysisSummary& summary);

}  // namespace orderflow
