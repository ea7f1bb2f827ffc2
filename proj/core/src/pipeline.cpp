#include "orderflow/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "orderflow/csv.hpp"
#include "orderflow/ingest.hpp"
#include "orderflow/simulate.hpp"
#include "parallel.hpp"

namespace orderflow {

namespace fs = std::filesystem;

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& msg) { throw Error(Errc::invalid_config, msg); }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open '" + path + "'");
  return in;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(Errc::io_failure, "short write to '" + path.string() + "'");
}

std::set<std::string> resolve_tickers(const RunConfig& config) {
  std::set<std::string> universe;
  for (const SectorSpec& sector : config.sectors) {
    for (const std::string& t : sector.tickers) universe.insert(t);
  }
  if (config.tickers.empty()) {
    if (universe.empty()) config_fail("no tickers configured");
    return universe;
  }
  std::set<std::string> requested(config.tickers.begin(), config.tickers.end());
  for (const std::string& t : requested) {
    if (!universe.contains(t)) {
      config_fail("ticker '" + t + "' is not covered by the sector map");
    }
  }
  return requested;
}

IngestFilter make_filter(const RunConfig& config, std::set<std::string> tickers) {
  IngestFilter filter;
  filter.tickers = std::move(tickers);
  filter.dates = config.window;
  if (config.regular_session_only) {
    filter.session = TimeWindow{kRegularOpenMs, kRegularCloseMs};
  }
  return filter;
}

// Streams every input through `on_event`. Malformed rows abort the run:
// silently skipping them would bias every downstream count.
void decode_inputs(const RunConfig& config, std::ostream& diag,
                   const std::function<void(const OrderEvent&)>& on_event) {
  for (const std::string& path : config.inputs) {
    std::ifstream in = open_input(path);
    std::size_t bad_rows = 0;
    std::string first_error;
    decode_stream(in, on_event, [&](const RowError& err) {
      ++bad_rows;
      if (bad_rows <= 5) {
        diag << path << ':' << err.line << ": " << errc_name(err.code) << ": " << err.message
             << '\n';
      }
      if (first_error.empty()) {
        first_error = path + ":" + std::to_string(err.line) + ": " + err.message;
      }
    });
    if (bad_rows > 0) {
      throw Error(Errc::bad_row, std::to_string(bad_rows) + " malformed row(s) in '" + path +
                                     "'; first: " + first_error);
    }
  }
}

struct LabelOutcome {
  std::map<SeriesKey, VolatilityLabel> labels;
  std::vector<std::string> notes;
};

// Daily stats -> normalized ranges -> mu/sigma thresholds -> one High and one
// Low day per stock.
LabelOutcome labels_from_stats(const RunConfig& config,
                               const std::map<SeriesKey, DailyPriceStats>& stats) {
  std::map<std::string, std::map<Date, double>> ranges;
  for (const auto& [key, day_stats] : stats) {
    ranges[key.ticker][key.date] = normalized_range(day_stats, config.normalization);
  }

  LabelOutcome out;
  for (const auto& [ticker, daily] : ranges) {
    try {
      auto labeled = classify_days(ticker, daily, config.window, config.sigma);
      for (const auto& [date, lab] : keep_extreme_days(labeled)) {
        out.labels.emplace(SeriesKey{ticker, date}, lab);
      }
    } catch (const Error& e) {
      out.notes.push_back(std::string("classification skipped for ") + ticker + ": " + e.what());
    }
  }
  return out;
}

std::string describe_plan(const RunConfig& config, const std::set<std::string>& tickers,
                          const char* verb) {
  std::ostringstream plan;
  plan << "plan: " << verb << ' ' << config.inputs.size() << " input(s), " << tickers.size()
       << " ticker(s), window " << config.window.from.to_string() << ".."
       << config.window.to.to_string() << ", out dir '" << config.out_dir << "' (dry run)\n";
  return plan.str();
}

json load_json_file(const std::string& path) {
  std::ifstream in = open_input(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_config, "config '" + path + "': " + e.what());
  }
  return j;
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_config:
    case Errc::invalid_length:
      return kExitConfig;
    case Errc::io_failure:
      return kExitIo;
    case Errc::missing_column:
    case Errc::bad_row:
    case Errc::unknown_event_type:
    case Errc::invalid_matrix_file:
    case Errc::insufficient_data:
      return kExitSchema;
    default:
      return kExitInternal;
  }
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  json j = load_json_file(path);
  if (!j.is_object()) config_fail("config root must be a JSON object");

  static const std::set<std::string> known = {
      "inputs",  "tickers", "sectors", "window",     "alpha",  "aggregation",
      "normalization", "sigma",   "session", "out",        "seed",   "labels",
      "matrix",  "length",  "days",    "sim_ticker", "sim_start_date"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) config_fail("unknown config key '" + key + "'");
  }

  try {
    if (j.contains("inputs")) base.inputs = j["inputs"].get<std::vector<std::string>>();
    if (j.contains("tickers")) base.tickers = j["tickers"].get<std::vector<std::string>>();
    if (j.contains("sectors")) {
      base.sectors.clear();
      for (const auto& s : j["sectors"]) {
        SectorSpec spec;
        spec.name = s.at("name").get<std::string>();
        spec.tickers = s.at("tickers").get<std::vector<std::string>>();
        if (spec.tickers.empty()) config_fail("sector '" + spec.name + "' has no tickers");
        base.sectors.push_back(std::move(spec));
      }
    }
    if (j.contains("window")) {
      auto from = Date::parse(j["window"].at("from").get<std::string>());
      auto to = Date::parse(j["window"].at("to").get<std::string>());
      if (!from || !to || *to < *from) config_fail("window must be from <= to, YYYY-MM-DD");
      base.window = DateInterval{*from, *to};
    }
    if (j.contains("alpha")) base.alpha = j["alpha"].get<double>();
    if (j.contains("aggregation")) {
      std::string v = j["aggregation"].get<std::string>();
      if (v == "pooled") base.aggregation = AggregationMode::kPooled;
      else if (v == "mean") base.aggregation = AggregationMode::kMeanOfMatrices;
      else config_fail("aggregation must be 'pooled' or 'mean'");
    }
    if (j.contains("normalization")) {
      std::string v = j["normalization"].get<std::string>();
      if (v == "low") base.normalization = RangeNormalization::kLow;
      else if (v == "open") base.normalization = RangeNormalization::kOpen;
      else if (v == "none") base.normalization = RangeNormalization::kNone;
      else config_fail("normalization must be 'low', 'open' or 'none'");
    }
    if (j.contains("sigma")) {
      std::string v = j["sigma"].get<std::string>();
      if (v == "population") base.sigma = SigmaMode::kPopulation;
      else if (v == "sample") base.sigma = SigmaMode::kSample;
      else config_fail("sigma must be 'population' or 'sample'");
    }
    if (j.contains("session")) {
      std::string v = j["session"].get<std::string>();
      if (v == "full") base.regular_session_only = false;
      else if (v == "regular") base.regular_session_only = true;
      else config_fail("session must be 'full' or 'regular'");
    }
    if (j.contains("out")) base.out_dir = j["out"].get<std::string>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("labels")) base.labels_path = j["labels"].get<std::string>();
    if (j.contains("matrix")) base.matrix_path = j["matrix"].get<std::string>();
    if (j.contains("length")) base.length = j["length"].get<std::uint64_t>();
    if (j.contains("days")) base.days = j["days"].get<unsigned>();
    if (j.contains("sim_ticker")) base.sim_ticker = j["sim_ticker"].get<std::string>();
    if (j.contains("sim_start_date")) {
      auto d = Date::parse(j["sim_start_date"].get<std::string>());
      if (!d) config_fail("sim_start_date must be YYYY-MM-DD");
      base.sim_start_date = *d;
    }
  } catch (const json::exception& e) {
    config_fail(std::string("config '") + path + "': " + e.what());
  }
  return base;
}

int cmd_classify(const RunConfig& config, std::ostream& diag) {
  try {
    if (config.inputs.empty()) config_fail("no input files configured");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) config_fail("alpha must lie in (0, 1)");
    std::set<std::string> tickers = resolve_tickers(config);

    if (config.dry_run) {
      diag << describe_plan(config, tickers, "classify");
      return kExitOk;
    }

    DailyStatsAccumulator stats_acc(make_filter(config, tickers));
    decode_inputs(config, diag, [&](const OrderEvent& ev) { stats_acc.add(ev); });

    LabelOutcome outcome = labels_from_stats(config, stats_acc.stats());
    for (const std::string& note : outcome.notes) diag << note << '\n';
    if (outcome.labels.empty()) {
      throw Error(Errc::insufficient_data, "no stock could be classified");
    }

    fs::create_directories(config.out_dir);
    std::ostringstream csv;
    write_labels_csv(csv, outcome.labels);
    write_file(fs::path(config.out_dir) / "labels.csv", csv.str());
    return kExitOk;
  } catch (const Error& e) {
    diag << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

int cmd_analyze(const RunConfig& config, std::ostream& diag) {
  try {
    if (config.inputs.empty()) config_fail("no input files configured");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) config_fail("alpha must lie in (0, 1)");
    std::set<std::string> tickers = resolve_tickers(config);

    if (config.dry_run) {
      diag << describe_plan(config, tickers, "analyze");
      return kExitOk;
    }

    AnalysisSummary summary;
    summary.inputs = config.inputs;
    summary.window_from = config.window.from.to_string();
    summary.window_to = config.window.to.to_string();
    summary.alpha = config.alpha;
    summary.aggregation = config.aggregation == AggregationMode::kPooled ? "pooled" : "mean";
    summary.normalization = config.normalization == RangeNormalization::kLow    ? "low"
                            : config.normalization == RangeNormalization::kOpen ? "open"
                                                                                : "none";
    summary.sigma_mode = config.sigma == SigmaMode::kPopulation ? "population" : "sample";
    summary.session = config.regular_session_only ? "regular" : "full";

    bool labels_computed = false;
    if (!config.labels_path.empty()) {
      std::ifstream in = open_input(config.labels_path);
      summary.labels = read_labels_csv(in);
    } else {
      DailyStatsAccumulator stats_acc(make_filter(config, tickers));
      decode_inputs(config, diag, [&](const OrderEvent& ev) { stats_acc.add(ev); });
      LabelOutcome outcome = labels_from_stats(config, stats_acc.stats());
      summary.labels = std::move(outcome.labels);
      summary.notes = std::move(outcome.notes);
      labels_computed = true;
    }

    // Chains are fitted only for the High/Low stock-days.
    std::set<SeriesKey> wanted;
    for (const auto& [key, lab] : summary.labels) {
      if (lab.label != VolLabel::kNeither && tickers.contains(key.ticker)) wanted.insert(key);
    }
    if (wanted.empty()) {
      throw Error(Errc::insufficient_data, "no High/Low labeled stock-days to analyze");
    }

    IngestFilter filter = make_filter(config, tickers);
    SequenceExtractor extractor(filter);
    decode_inputs(config, diag, [&](const OrderEvent& ev) {
      if (wanted.contains(SeriesKey{ev.ticker, ev.date})) extractor.add(ev);
    });
    const std::map<SeriesKey, StateSequence>& sequences = extractor.sequences();

    // Per-day counts and dependency tests, parallel across chains with
    // index-addressed results.
    std::vector<const StateSequence*> chain_list;
    chain_list.reserve(sequences.size());
    for (const auto& [key, seq] : sequences) chain_list.push_back(&seq);

    struct ChainResult {
      std::optional<TransitionCounts> counts;
      std::optional<ChiSquareResult> chi;
      std::string error;
    };
    std::vector<ChainResult> chain_results(chain_list.size());
    detail::parallel_for(chain_list.size(), [&](std::size_t i) {
      const StateSequence& seq = *chain_list[i];
      try {
        TransitionCounts counts = count_transitions(seq);
        chain_results[i].chi = chi_square_test(counts, config.alpha);
        chain_results[i].counts = std::move(counts);
      } catch (const Error& e) {
        chain_results[i].error = e.what();
      }
    });

    std::map<SeriesKey, TransitionCounts> chains;
    for (std::size_t i = 0; i < chain_list.size(); ++i) {
      const StateSequence& seq = *chain_list[i];
      SeriesKey key{seq.ticker, seq.date};
      if (!chain_results[i].counts) {
        summary.notes.push_back("chain skipped for " + key.ticker + " " + key.date.to_string() +
                                ": " + chain_results[i].error);
        continue;
      }
      chains.emplace(key, *chain_results[i].counts);
      ChiSquareRecord rec;
      rec.ticker = key.ticker;
      rec.scope = "day";
      rec.date = key.date;
      rec.regime = summary.labels.at(key).label == VolLabel::kHigh ? Regime::kHigh : Regime::kLow;
      rec.result = *chain_results[i].chi;
      if (!rec.result.reject_null) {
        summary.notes.push_back("independence not rejected for " + key.ticker + " " +
                                key.date.to_string() + " (p=" +
                                format_double(rec.result.p_value) + "); chain kept");
      }
      summary.chi_square.push_back(std::move(rec));
    }
    if (chains.empty()) {
      throw Error(Errc::insufficient_data, "no chain had enough transitions to fit");
    }

    // Pooled per (ticker, regime); with one selected day per regime this
    // coincides with the per-day test, but supplied label files may carry
    // several days.
    std::map<std::pair<std::string, Regime>, std::vector<TransitionCounts>> pooled_parts;
    for (const auto& [key, counts] : chains) {
      VolLabel lab = summary.labels.at(key).label;
      Regime regime = lab == VolLabel::kHigh ? Regime::kHigh : Regime::kLow;
      pooled_parts[{key.ticker, regime}].push_back(counts);
    }
    for (const auto& [key, parts] : pooled_parts) {
      ChiSquareRecord rec;
      rec.ticker = key.first;
      rec.scope = "pooled";
      rec.regime = key.second;
      rec.result = chi_square_test(pool_counts(parts), config.alpha);
      summary.chi_square.push_back(std::move(rec));
    }

    // Sector-regime aggregates; an empty sector is recorded, not fatal.
    for (const SectorSpec& sector : config.sectors) {
      bool requested = std::any_of(sector.tickers.begin(), sector.tickers.end(),
                                   [&](const std::string& t) { return tickers.contains(t); });
      if (!requested) continue;
      std::vector<SectorSpec> one{sector};
      try {
        for (SectorChainSet& set : build_sector_chains(chains, summary.labels, one,
                                                       config.aggregation)) {
          if (!set.analytics) {
            summary.notes.push_back("analytics unavailable for " + set.sector.name + "/" +
                                    regime_name(set.regime) + ": " + set.analytics_error);
          }
          summary.sets.push_back(std::move(set));
        }
      } catch (const Error& e) {
        summary.notes.push_back(std::string("sector skipped: ") + e.what());
      }
    }

    fs::create_directories(config.out_dir);
    fs::path out_dir(config.out_dir);

    if (labels_computed) {
      std::ostringstream csv;
      write_labels_csv(csv, summary.labels);
      write_file(out_dir / "labels.csv", csv.str());
    }
    write_file(out_dir / "chi_square.csv", chi_square_table_csv(summary.chi_square));
    write_file(out_dir / "stationary.csv", stationary_table_csv(summary.sets));
    write_file(out_dir / "mrt.csv", mrt_table_csv(summary.sets));
    write_file(out_dir / "spectral.csv", spectral_table_csv(summary.sets));
    write_file(out_dir / "probes.csv", probes_table_csv(summary.sets));
    for (const SectorChainSet& set : summary.sets) {
      std::string base = "heatmap_" + sector_slug(set.sector.name) + "_" +
                         (set.regime == Regime::kHigh ? "high" : "low");
      std::string title = set.sector.name + " (" + regime_name(set.regime) + " volatility)";
      write_file(out_dir / (base + ".svg"), heatmap_svg(set.matrix, title));
      std::ostringstream csv;
      write_matrix_csv(csv, set.matrix);
      write_file(out_dir / (base + ".csv"), csv.str());
    }
    write_file(out_dir / "summary.json", summary_json(summary));

    for (const std::string& note : summary.notes) diag << note << '\n';
    return kExitOk;
  } catch (const Error& e) {
    diag << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

int cmd_simulate(const RunConfig& config, std::ostream& diag) {
  try {
    if (config.matrix_path.empty()) config_fail("simulate requires a matrix file");
    if (config.length < 1) config_fail("simulate requires a length of at least 1");
    if (config.days < 1 || config.days > 100) config_fail("days must lie in [1, 100]");

    if (config.dry_run) {
      diag << "plan: simulate " << config.days << " day(s) x " << config.length
           << " step(s) from '" << config.matrix_path << "', out dir '" << config.out_dir
           << "' (dry run)\n";
      return kExitOk;
    }

    std::ifstream matrix_in = open_input(config.matrix_path);
    TransitionMatrix matrix = read_matrix_csv(matrix_in);

    // Start in the matrix's first state; with the canonical order that is AB
    // whenever AB is present.
    std::vector<double> initial(matrix.order(), 0.0);
    initial[0] = 1.0;

    std::vector<OrderEvent> events;
    Date date = config.sim_start_date;
    for (unsigned day = 0; day < config.days; ++day) {
      SimulationSpec spec;
      spec.matrix = matrix;
      spec.initial = initial;
      spec.length = config.length;
      spec.seed = config.seed + day;
      spec.ticker = config.sim_ticker;
      spec.date = date;
      StateSequence seq = simulate_sequence(spec);

      // Per-day half-spread grows linearly, so a multi-day corpus always
      // contains one widest and one narrowest day for the classifier.
      double half_spread = 0.5 * static_cast<double>(day + 1);
      PriceModel prices{100.0 - half_spread, 100.0 + half_spread};
      std::uint64_t base_id = 10001 + static_cast<std::uint64_t>(day) * config.length;
      std::vector<OrderEvent> day_events = sequence_to_events(seq, prices, base_id);
      events.insert(events.end(), day_events.begin(), day_events.end());
      date = date.next_day();
    }

    fs::create_directories(config.out_dir);
    std::ostringstream csv;
    write_events_csv(csv, events);
    write_file(fs::path(config.out_dir) / "simulated.csv", csv.str());
    return kExitOk;
  } catch (const Error& e) {
    diag << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

}  // namespace orderflow
