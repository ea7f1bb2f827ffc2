#pragma once

#include <stdexcept>
#include <string>

namespace orderflow {

// Every failure the library reports, as a machine-matchable code. Exit-code
// mapping for the CLI: config -> 2, io -> 3, schema/data -> 4.
enum class Errc {
  // configuration
  invalid_config,
  // filesystem / streams
  io_failure,
  // CSV schema and row-level decoding
  missing_column,
  bad_row,
  unknown_event_type,
  invalid_matrix_file,
  // volatility
  non_positive_low,
  insufficient_data,
  // markov
  sequence_too_short,
  state_set_mismatch,
  empty_counts,
  not_row_stochastic,
  not_ergodic,
  singular_system,
  no_convergence,
  zero_stationary_mass,
  // simulation
  invalid_distribution,
  invalid_length,
  insufficient_occurrences,
  // report
  empty_sector,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace orderflow
