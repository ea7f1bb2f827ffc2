#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "orderflow/pipeline.hpp"

namespace {

using orderflow::RunConfig;

struct FlagOverrides {
  std::string config_path;
  std::vector<std::string> inputs;
  std::vector<std::string> tickers;
  std::string window;
  double alpha = -1.0;
  std::string agg;
  std::string norm;
  std::string sigma;
  std::string session;
  std::string out;
  std::string labels;
  std::string matrix;
  std::uint64_t length = 0;
  unsigned days = 0;
  std::string sim_ticker;
  bool seed_set = false;
  std::uint64_t seed = 0;
  bool dry_run = false;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file; flags override its fields");
  cmd->add_option("--input", flags.inputs, "Input event-log CSV file(s)");
  cmd->add_option("--tickers", flags.tickers, "Tickers to include (comma separated)")
      ->delimiter(',');
  cmd->add_option("--window", flags.window, "Classification window as FROM:TO (YYYY-MM-DD)");
  cmd->add_option("--alpha", flags.alpha, "Chi-square significance level (default 0.01)");
  cmd->add_option("--agg", flags.agg, "Sector aggregation: pooled|mean (default pooled)")
      ->check(CLI::IsMember({"pooled", "mean"}));
  cmd->add_option("--norm", flags.norm, "Range normalization: low|open|none (default low)")
      ->check(CLI::IsMember({"low", "open", "none"}));
  cmd->add_option("--sigma", flags.sigma, "Sigma flavor: population|sample (default population)")
      ->check(CLI::IsMember({"population", "sample"}));
  cmd->add_option("--session", flags.session, "Event window: full|regular (default full)")
      ->check(CLI::IsMember({"full", "regular"}));
  cmd->add_option("--out", flags.out, "Output directory (default 'out')");
  cmd->add_option("--seed", flags.seed, "Simulation seed")->each([&flags](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_flag("--dry-run", flags.dry_run, "Print the plan and write nothing");
}

// Merge order: built-in defaults, then the config file, then flags.
RunConfig merge_config(const FlagOverrides& flags) {
  RunConfig config;
  if (!flags.config_path.empty()) config = orderflow::load_config_file(flags.config_path, config);

  if (!flags.inputs.empty()) config.inputs = flags.inputs;
  if (!flags.tickers.empty()) config.tickers = flags.tickers;
  if (!flags.window.empty()) {
    std::size_t colon = flags.window.find(':');
    auto from = orderflow::Date::parse(flags.window.substr(0, colon));
    auto to = colon == std::string::npos
                  ? std::nullopt
                  : orderflow::Date::parse(flags.window.substr(colon + 1));
    if (!from || !to || *to < *from) {
      throw orderflow::Error(orderflow::Errc::invalid_config,
                             "--window must be FROM:TO with FROM <= TO");
    }
    config.window = orderflow::DateInterval{*from, *to};
  }
  if (flags.alpha >= 0.0) config.alpha = flags.alpha;
  if (!flags.agg.empty()) {
    config.aggregation = flags.agg == "pooled" ? orderflow::AggregationMode::kPooled
                                               : orderflow::AggregationMode::kMeanOfMatrices;
  }
  if (!flags.norm.empty()) {
    config.normalization = flags.norm == "low"    ? orderflow::RangeNormalization::kLow
                           : flags.norm == "open" ? orderflow::RangeNormalization::kOpen
                                                  : orderflow::RangeNormalization::kNone;
  }
  if (!flags.sigma.empty()) {
    config.sigma = flags.sigma == "population" ? orderflow::SigmaMode::kPopulation
                                               : orderflow::SigmaMode::kSample;
  }
  if (!flags.session.empty()) config.regular_session_only = flags.session == "regular";
  if (!flags.out.empty()) config.out_dir = flags.out;
  if (!flags.labels.empty()) config.labels_path = flags.labels;
  if (!flags.matrix.empty()) config.matrix_path = flags.matrix;
  if (flags.length > 0) config.length = flags.length;
  if (flags.days > 0) config.days = flags.days;
  if (!flags.sim_ticker.empty()) config.sim_ticker = flags.sim_ticker;
  if (flags.seed_set) config.seed = flags.seed;
  config.dry_run = flags.dry_run;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order-flow analytics: volatility day labeling and Markov-chain "
               "diagnostics over exchange event logs"};
  app.require_subcommand(1);

  FlagOverrides classify_flags, analyze_flags, simulate_flags;

  CLI::App* classify = app.add_subcommand("classify", "Label High/Low volatility stock-days");
  add_common_flags(classify, classify_flags);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Fit per-day chains, aggregate per sector and emit the report bundle");
  add_common_flags(analyze, analyze_flags);
  analyze->add_option("--labels", analyze_flags.labels,
                      "Precomputed labels CSV (default: classify first)");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate a synthetic event-log CSV from a chain");
  add_common_flags(simulate, simulate_flags);
  simulate->add_option("--matrix", simulate_flags.matrix, "Transition matrix CSV")->required();
  simulate->add_option("--length", simulate_flags.length, "Steps per simulated day")->required();
  simulate->add_option("--days", simulate_flags.days, "Number of simulated days (default 1)");
  simulate->add_option("--ticker", simulate_flags.sim_ticker, "Ticker for synthetic rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    // CLI11's own codes collapse into the config-error class, except --help.
    return code == 0 ? orderflow::kExitOk : orderflow::kExitConfig;
  }

  try {
    if (classify->parsed()) {
      return orderflow::cmd_classify(merge_config(classify_flags), std::cerr);
    }
    if (analyze->parsed()) {
      return orderflow::cmd_analyze(merge_config(analyze_flags), std::cerr);
    }
    return orderflow::cmd_simulate(merge_config(simulate_flags), std::cerr);
  } catch (const orderflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return orderflow::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return orderflow::kExitInternal;
  }
}
