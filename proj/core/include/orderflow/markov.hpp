#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "orderflow/events.hpp"
#include "orderflow/matrix.hpp"
#include "orderflow/states.hpp"

namespace orderflow {

// Adjacent-pair transition tallies. `states` fixes the row/column order and
// is always a canonically ordered subset of the ten-state alphabet.
struct TransitionCounts {
  std::vector<OrderState> states;
  CountMatrix counts;  // counts(i, j) = number of i -> j adjacencies

  std::uint64_t total() const { return counts.total(); }

  static TransitionCounts zero(std::span<const OrderState> states);
};

// Row-stochastic one-step transition probabilities.
struct TransitionMatrix {
  std::vector<OrderState> states;
  RealMatrix p;
  std::vector<OrderState> removed_states;  // never-sourced states dropped by fit_mle

  std::size_t order() const { return states.size(); }

  // Throws Error{not_row_stochastic} unless every entry is in [0, 1] and
  // every row sums to 1 within 1e-12.
  void validate() const;
};

struct ChiSquareResult {
  double statistic = 0.0;
  RealMatrix expected;  // e(i, j); zero where a marginal vanishes
  int dof = 0;          // (r_eff - 1)^2 over states actually present
  double p_value = 1.0;
  std::size_t low_expected_cells = 0;  // included cells with e < 5
  double alpha = 0.0;
  bool reject_null = false;
};

struct ChainStructure {
  std::vector<std::vector<std::size_t>> communicating_classes;  // state indices
  std::vector<std::size_t> class_of;  // state index -> class index
  bool irreducible = false;
  std::vector<int> periods;  // per state; 0 when the state has no return path
  bool aperiodic = false;
  std::vector<bool> recurrent;  // closed communicating class
  bool ergodic = false;
};

struct StationaryDistribution {
  std::vector<double> pi;
};

struct SpectralSummary {
  std::vector<std::complex<double>> eigenvalues;  // sorted by descending modulus
  double slem = 0.0;            // largest modulus among non-unit eigenvalues
  double gap_absolute = 1.0;    // 1 - slem
  double gap = 1.0;             // 1 - second-largest real part
  double relaxation_time = 1.0; // 1 / gap_absolute
};

struct EntropyRateResult {
  double bits_per_step = 0.0;
  double max_bits = 0.0;  // log2(order)
};

// Diagnostics for one fitted ergodic chain.
struct ChainAnalytics {
  ChainStructure structure;
  StationaryDistribution pi;
  std::vector<double> mean_recurrence;
  SpectralSummary spectral;
  EntropyRateResult entropy;
};

// Tallies adjacent pairs over the full ten-state alphabet.
// Throws Error{sequence_too_short} when the sequence has fewer than 2 states.
TransitionCounts count_transitions(const StateSequence& seq);

// Elementwise sum; parts must share one state list. An empty list yields the
// zero matrix over the full alphabet.
TransitionCounts pool_counts(std::span<const TransitionCounts> parts);

// Maximum-likelihood row normalisation. States that never occur as a
// transition source are removed from the chain (iterating until every
// remaining row has positive sum) and recorded in `removed_states`.
TransitionMatrix fit_mle(const TransitionCounts& counts);

// Test of serial independence against the alternative of first-order
// dependence. Cells whose row or column marginal vanishes are excluded and
// the degrees of freedom use the effective state count.
ChiSquareResult chi_square_test(const TransitionCounts& counts, double alpha);

// Communicating classes (Tarjan SCC over edges p_ij > 0), per-class periods
// (gcd of breadth-first level slacks), recurrence and ergodicity flags.
ChainStructure classify_structure(const TransitionMatrix& matrix);

// Solves pi = pi P, sum(pi) = 1 by replacing one redundant equation with the
// normalisation row (partial-pivoting LU). Requires an ergodic structure.
StationaryDistribution stationary_distribution(const TransitionMatrix& matrix,
                                               const ChainStructure& structure);

// mu_jj = 1 / pi_j for a positive-recurrent ergodic chain.
std::vector<double> mean_recurrence_times(const StationaryDistribution& pi);

// Full dense eigenvalue set; slem excludes the unique unit eigenvalue.
SpectralSummary spectral_summary(const TransitionMatrix& matrix);

// H = -sum_ij pi_i p_ij log2 p_ij with 0 log 0 = 0.
EntropyRateResult entropy_rate(const TransitionMatrix& matrix,
                               const StationaryDistribution& pi);

// classify + stationary + recurrence + spectral + entropy in one shot.
// Throws Error{not_ergodic} when the chain has no unique stationary law.
ChainAnalytics analyze_chain(const TransitionMatrix& matrix);

}  // namespace orderflow
