#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "orderflow/errors.hpp"
#include "orderflow/report.hpp"
#include "orderflow/time.hpp"
#include "orderflow/volatility.hpp"

namespace orderflow {

// Process exit codes: one class per failure family.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitSchema = 4;

int exit_code_for(Errc code);

struct RunConfig {
  std::vector<std::string> inputs;
  std::vector<std::string> tickers;  // empty means every ticker in the sector map
  std::vector<SectorSpec> sectors = default_sectors();
  DateInterval window{Date(2018, 10, 1), Date(2018, 12, 31)};
  double alpha = 0.01;
  AggregationMode aggregation = AggregationMode::kPooled;
  RangeNormalization normalization = RangeNormalization::kLow;
  SigmaMode sigma = SigmaMode::kPopulation;
  bool regular_session_only = false;  // restrict to 09:30-16:00
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  bool dry_run = false;

  // analyze
  std::string labels_path;  // precomputed labels; empty computes them

  // simulate
  std::string matrix_path;
  std::uint64_t length = 0;
  unsigned days = 1;
  std::string sim_ticker = "SIM";
  Date sim_start_date{2018, 11, 1};
};

// Declarative JSON config; CLI flags override individual fields afterwards.
// Unknown keys are rejected. Throws Error{invalid_config} / Error{io_failure}.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// The subcommand drivers. Diagnostics go to `diag`; artifacts go under
// config.out_dir. Each returns a process exit code.
int cmd_classify(const RunConfig& config, std::ostream& diag);
int cmd_analyze(const RunConfig& config, std::ostream& diag);
int cmd_simulate(const RunConfig& config, std::ostream& diag);

}  // namespace orderflow
